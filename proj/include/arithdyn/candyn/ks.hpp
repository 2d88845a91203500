#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arithdyn/candyn/alpha.hpp"
#include "arithdyn/candyn/tate.hpp"
#include "arithdyn/dynsys/density.hpp"

namespace arithdyn {

/// ExactMatch: alpha_f(P) = lambda_1(f) is proved for this point (Conditions
/// A and B certified, h+(P) > 0). EmpiricallyConsistent: the ratio estimate
/// lies within the tolerance of lambda_1. Inconclusive: neither.
enum class KSVerdict { ExactMatch, EmpiricallyConsistent, Inconclusive };

inline const char* to_string(KSVerdict v) {
    switch (v) {
    case KSVerdict::ExactMatch: return "ExactMatch";
    case KSVerdict::EmpiricallyConsistent: return "EmpiricallyConsistent";
    default: return "Inconclusive";
    }
}

struct KSOptions {
    long alpha_steps = 10;
    long tate_steps = 8;
    /// Cone fixing the orientation of nu_+ and nu_- for automorphisms. If
    /// absent, Wehler systems use the cone dual to the fiber classes and
    /// other systems the nonnegative orthant.
    std::optional<RationalCone> cone;
    Rational eigen_eps = Rational(1, Integer(1) << 64);
    Rational fibered_slack = Rational(1, 20);
    Rational consistency_tol = Rational(1, 20);  // relative, ratio vs lambda_1
    unsigned density_degree = 2;
    OrbitOptions orbit;
};

/// Lower bound of the total estimate against the base estimate from the
/// projected orbit; both use ratio estimators on ample classes.
struct FiberedCheck {
    RationalInterval alpha_total;
    RationalInterval alpha_base;
    Rational slack;
    bool holds = false;
};

/// Every field that could not be produced is absent and the reason is
/// listed in warnings.
struct KSReport {
    std::string system_kind;
    RealAlgebraicNumber lambda1 = RealAlgebraicNumber::from_rational(Rational(0));
    RationalInterval lambda1_interval{Rational(0)};
    IntPolynomial charpoly;
    std::optional<AlphaEstimate> alpha;
    std::optional<ConditionAReport> condition_a;
    std::optional<ConditionBReport> condition_b;
    std::optional<EigenvectorPair> pair;
    std::optional<CanonicalHeightResult> canonical;
    std::optional<RealAlgebraicNumber> canonical_alpha;
    std::optional<FiberedCheck> fibered;
    DensityReport density;
    KSVerdict verdict = KSVerdict::Inconclusive;
    std::string verdict_text;
    std::vector<std::string> warnings;
};

/// Cone spanned by the classes v with v . D_i >= 0 for the Gram matrix G.
inline RationalCone fiber_dual_cone(const IntMatrix& gram) {
    auto inv = inverse(to_rational(gram));
    if (!inv) throw InvalidInput("Gram matrix is singular");
    std::vector<Vec<Rational>> gens;
    for (std::size_t j = 0; j < gram.cols(); ++j) {
        Vec<Rational> g;
        for (std::size_t i = 0; i < gram.rows(); ++i) g.push_back((*inv)(i, j));
        gens.push_back(std::move(g));
    }
    return RationalCone(std::move(gens));
}

inline RationalCone nonnegative_orthant(std::size_t n) {
    std::vector<Vec<Rational>> gens;
    for (std::size_t i = 0; i < n; ++i) {
        Vec<Rational> e(n, Rational(0));
        e[i] = 1;
        gens.push_back(std::move(e));
    }
    return RationalCone(std::move(gens));
}

inline std::vector<RationalInterval> ample_weights(std::size_t factors) {
    return std::vector<RationalInterval>(factors, RationalInterval(Rational(1)));
}

namespace detail {

inline KSReport ks_report_body(const System& system, const MultiProjPoint& p, const KSOptions& opt) {
    detail::require_shape(system, p);
    KSReport r;
    r.system_kind = system.kind();
    PullbackMap f = pullback_matrix(system);
    SpectralData sd = spectral_data(f);
    r.lambda1 = sd.radius;
    r.lambda1_interval = refine(sd.radius, Rational(1, Integer(1) << 60));
    r.charpoly = sd.charpoly;
    std::size_t nf = ambient(system).factors();

    try {
        OrbitRecord orbit = iterate_orbit(system, p, opt.alpha_steps, {ample_weights(nf)}, opt.orbit);
        r.alpha = alpha_estimate(orbit);
        if (const auto* prod = system.as<ProductSystem>()) {
            std::size_t k = factor_count(*prod->left);
            OrbitRecord base = project_orbit(orbit, k, {ample_weights(k)});
            FiberedCheck fc;
            fc.alpha_total = r.alpha->ratio;
            fc.alpha_base = alpha_estimate(base).ratio;
            fc.slack = opt.fibered_slack;
            fc.holds = fc.alpha_total.mid() >= fc.alpha_base.mid() - fc.slack;
            r.fibered = fc;
        }
    } catch (const Error& e) {
        r.warnings.push_back(std::string("alpha estimates unavailable: ") + e.what());
    }

    try {
        r.density = density_heuristic(system, p, opt.density_degree);
    } catch (const Error& e) {
        r.density = {DensityVerdict::Inconclusive, false, e.what()};
    }

    if (!f.is_automorphism() || !is_invertible(system)) {
        r.warnings.push_back("canonical heights need an automorphism; only empirical estimates are reported");
        r.verdict_text = "empirical only";
        return r;
    }
    try {
        r.condition_a = condition_A(f);
        if (!r.condition_a->holds) {
            r.warnings.push_back("Condition A fails: lambda(f) and lambda(f^-1) differ or do not exceed 1");
            r.verdict_text = "empirical only";
            return r;
        }
        RationalCone k = opt.cone ? *opt.cone
                                  : (system.as<WehlerSystem>() ? fiber_dual_cone(system.as<WehlerSystem>()->gram)
                                                               : nonnegative_orthant(f.rank()));
        r.pair = eigenvector_pair(f, k, opt.eigen_eps);
        if (const auto* w = system.as<WehlerSystem>()) {
            r.condition_b = condition_B(TopIntersectionForm::from_gram(to_rational(w->gram)), *r.pair, k);
        } else {
            r.warnings.push_back("no intersection form is attached to this system; Condition B is not checked");
        }
        r.canonical = canonical_pair(system, p, *r.pair, opt.tate_steps, opt.orbit);
    } catch (const Error& e) {
        r.warnings.push_back(std::string("canonical heights unavailable: ") + e.what());
        r.verdict_text = "empirical only";
        return r;
    }
    bool b_ok = r.condition_b && r.condition_b->verdict == Verdict::True;
    bool hplus_pos = r.canonical->hhat_plus.positive();
    if (b_ok && hplus_pos) {
        r.canonical_alpha = r.lambda1;
        r.verdict_text = "alpha_f(P) = lambda_1(f) (Conditions A and B certified, canonical height h+ > 0; the Tate error bound is empirical)";
    } else if (b_ok) {
        r.verdict_text = "h+(P) is not certified positive; no exact verdict";
        r.warnings.push_back("h+ enclosure does not exclude 0");
    } else {
        r.verdict_text = "Condition B not certified; no exact verdict";
    }
    return r;
}

} // namespace detail

inline KSReport ks_report(const System& system, const MultiProjPoint& p, const KSOptions& opt = {}) {
    KSReport r = detail::ks_report_body(system, p, opt);
    if (r.canonical_alpha) {
        r.verdict = KSVerdict::ExactMatch;
    } else if (r.alpha) {
        Rational lam = r.lambda1_interval.mid();
        Rational dev = abs(r.alpha->ratio.mid() - lam);
        r.verdict = dev <= opt.consistency_tol * lam ? KSVerdict::EmpiricallyConsistent : KSVerdict::Inconclusive;
        if (r.verdict == KSVerdict::Inconclusive)
            r.warnings.push_back("ratio estimate is outside the consistency tolerance of lambda_1");
    } else {
        r.verdict = KSVerdict::Inconclusive;
    }
    return r;
}

} // namespace arithdyn
