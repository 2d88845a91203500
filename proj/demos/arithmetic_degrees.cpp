// Arithmetic degrees along orbits of a power map, a monomial map and their
// product, compared with lambda_1.

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

MultiProjPoint affine(std::initializer_list<long> xs) {
    std::vector<MultiProjPoint::Tuple> v;
    for (long x : xs) v.push_back({Integer(x), Integer(1)});
    return MultiProjPoint(std::move(v));
}

void report(const std::string& name, const System& f, const MultiProjPoint& p, long n) {
    KSOptions opt;
    opt.alpha_steps = n;
    KSReport r = ks_report(f, p, opt);
    std::cout << name << ": lambda_1 = " << num(r.lambda1_interval.mid(), 10);
    if (r.alpha)
        std::cout << ", ratio estimate at N = " << n << ": " << num(r.alpha->ratio.mid(), 10)
                  << ", normalized root: " << num(r.alpha->normalized_root.mid(), 10);
    std::cout << ", verdict " << to_string(r.verdict) << "\n";
    if (r.fibered)
        std::cout << "  base estimate " << num(r.fibered->alpha_base.mid(), 10) << ", fibered inequality "
                  << (r.fibered->holds ? "holds" : "fails") << "\n";
}

} // namespace

int main() {
    try {
        report("squaring map on P^2", PowerSystem(2, 2), MultiProjPoint({{Integer(1), Integer(2), Integer(3)}}), 10);
        report("monomial map [[2,1],[1,1]]", MonomialSystem(IntMatrix{{2, 1}, {1, 1}}), affine({2, 3}), 25);
        report("cubing map x monomial map", System::product(PowerSystem(3, 1), MonomialSystem(IntMatrix{{2, 1}, {1, 1}})),
               affine({2, 2, 3}), 25);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
}
