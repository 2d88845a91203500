// Wehler surface walk-through: lambda_1 of the composite of the three Vieta
// involutions, its isotropic eigenvectors, and canonical heights of the
// sample points. Usage: wehler_canonical_heights [config.json]

#include <iostream>
#include <sstream>

#include "arithdyn/candyn.hpp"
#include "arithdyn/io.hpp"

using namespace arithdyn;

namespace {

/// Fixed-point rendering of an exact rational, for display only.
std::string num(const Rational& x, int digits) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << to_double(x);
    return s.str();
}

} // namespace

int main(int argc, char** argv) {
    std::string path = argc > 1 ? argv[1] : std::string(ARITHDYN_SOURCE_DIR) + "/configs/wehler_222.json";
    try {
        io::RunConfig c = io::parse_run_config(io::read_json_file(path));
        if (!c.system || !c.system->as<WehlerSystem>()) throw InvalidInput("the config must describe a Wehler system");
        const System& f = *c.system;
        const WehlerSystem& w = *f.as<WehlerSystem>();

        PullbackMap pb = pullback_matrix(f);
        SpectralData sd = spectral_data(pb);
        std::cout << "f^* = " << io::to_json(pb.matrix()).dump() << "\ncharpoly " << io::factorization_string(sd.charpoly) << "\nlambda_1 = "
                  << num(refine(sd.radius, Rational(1, 1000000000000L)).mid(), 12) << "\n\n";

        EigenvectorPair pair = eigenvector_pair(pb, fiber_dual_cone(w.gram), Rational(1, Integer(1) << 64));
        auto form = TopIntersectionForm::from_gram(to_rational(w.gram));
        auto show = [](const DivisorClass& d) {
            std::string out = "(";
            for (std::size_t i = 0; i < d.coords.size(); ++i) out += (i ? ", " : "") + to_string(d.coords[i]);
            return out + ")";
        };
        std::cout << "nu_+ = " << show(pair.nu_plus) << "\nnu_- = " << show(pair.nu_minus) << "  (a = lambda_1)\n";
        std::cout << "(nu_+ + nu_-)^2 = " << num(condition_B(form, pair, fiber_dual_cone(w.gram)).volume.mid(), 8)
                  << " > 0\n\n";

        for (const auto& p : c.points) {
            auto per = periodicity_test(f, p.point, c.options.house_bound, c.options.max_period);
            auto h = canonical_pair(f, p.point, pair, c.options.tate_N);
            std::cout << p.name << " " << io::to_json(p.point).dump() << ": " << to_string(per.kind);
            if (per.kind == PeriodicityKind::Periodic) std::cout << " (period " << per.period << ")";
            std::cout << "\n  h+ in [" << num(h.hhat_plus.lo(), 10) << ", " << num(h.hhat_plus.hi(), 10) << "]"
                      << "\n  h- in [" << num(h.hhat_minus.lo(), 10) << ", " << num(h.hhat_minus.hi(), 10) << "]\n";
            if (per.kind != PeriodicityKind::Periodic) {
                auto res = functional_equation_residual(f, p.point, h, 1);
                std::cout << "  residual at n = 1 in [" << num(res.lo(), 12) << ", " << num(res.hi(), 12)
                          << "]\n";
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
}
