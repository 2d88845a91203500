#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arithdyn/dynsys.hpp"

namespace arithdyn {

enum class Direction { Forward, Backward };

/// Enclosures of the divisor weights, tight enough that their error is far
/// below the interval widths of the logarithms.
inline std::vector<RationalInterval> weight_enclosure(const DivisorClass& d, unsigned bits = 256) {
    std::vector<RationalInterval> w;
    for (const auto& c : d.coords) w.push_back(c.enclose(pow2(-static_cast<long>(bits))).rounded_out(bits + 8));
    return w;
}

inline std::vector<RationalInterval> weight_enclosure(const std::vector<Rational>& d) {
    std::vector<RationalInterval> w;
    for (const auto& c : d) w.emplace_back(c);
    return w;
}

/// lambda^{-N} h_D(f^{+-N} P) with the empirical Tate bound. The constant C
/// is the largest observed defect |h(k+1) - lambda h(k)|; the bound
/// C lambda^{-N} / (1 - lambda^{-1}) is only as good as that estimate.
struct TateResult {
    RationalInterval value;      // lambda^{-N} h_D(f^{+-N} P)
    RationalInterval enclosure;  // value widened by error_bound
    Rational tate_constant;
    Rational error_bound;
    long iterations = 0;
    bool empirical = true;
};

namespace detail {

inline RationalInterval lambda_enclosure(const RealAlgebraicNumber& lambda) {
    return refine(lambda, pow2(-240)).rounded_out(256);
}

inline void require_expanding(const RealAlgebraicNumber& lambda) {
    if (compare(lambda, Rational(1)) != Ordering::Greater)
        throw PreconditionError("the Tate limit needs lambda > 1");
}

} // namespace detail

/// Tate limit read off an orbit record whose entries are consecutive iterates.
inline TateResult tate_from_orbit(const OrbitRecord& orbit, std::size_t class_index, const RealAlgebraicNumber& lambda) {
    detail::require_expanding(lambda);
    if (orbit.entries.empty()) throw InvalidInput("empty orbit");
    if (class_index >= orbit.classes.size()) throw InvalidInput("divisor class index out of range");
    RationalInterval lam = detail::lambda_enclosure(lambda);
    Rational c = 0;
    for (std::size_t k = 0; k + 1 < orbit.entries.size(); ++k) {
        RationalInterval d = orbit.entries[k + 1].heights[class_index] - lam * orbit.entries[k].heights[class_index];
        c = std::max(c, d.magnitude());
    }
    long n = static_cast<long>(orbit.entries.size()) - 1;
    RationalInterval lam_n = pow(lam, static_cast<unsigned>(n));
    RationalInterval value = (orbit.back().heights[class_index] / lam_n).rounded_out(256);
    // Upper bound via the lower end of the lambda enclosure.
    Rational inv_lo = 1 / lam.lo();
    Rational bound = c * rpow(inv_lo, static_cast<unsigned long>(n)) / (1 - inv_lo);
    bound = dyadic_ceil(bound, 256);
    return {value, inflate(value, bound), c, bound, n, true};
}

inline OrbitOptions tate_orbit_options(OrbitOptions opt) {
    opt.log_prec = std::max<mpfr_prec_t>(opt.log_prec, 192);
    return opt;
}

/// lim lambda^{-n} h_D(f^{+-n} P) truncated at n = N.
inline TateResult tate_limit(const System& system, const MultiProjPoint& p, const std::vector<RationalInterval>& weights,
                             const RealAlgebraicNumber& lambda, long N, Direction dir, const OrbitOptions& opt = {}) {
    detail::require_expanding(lambda);
    if (N < 1) throw InvalidInput("the Tate limit needs N >= 1");
    if (dir == Direction::Backward && !is_invertible(system))
        throw PreconditionError("a backward Tate limit needs an invertible system");
    OrbitRecord orbit = iterate_orbit(system, p, dir == Direction::Forward ? N : -N, {weights}, tate_orbit_options(opt));
    return tate_from_orbit(orbit, 0, lambda);
}

inline TateResult tate_limit(const System& system, const MultiProjPoint& p, const DivisorClass& d,
                             const RealAlgebraicNumber& lambda, long N, Direction dir, const OrbitOptions& opt = {}) {
    return tate_limit(system, p, weight_enclosure(d), lambda, N, dir, opt);
}

/// Canonical heights h+ (forward, nu_+) and h- (backward, nu_-) at one N.
/// A one-sided result has h- := 0 and comes from a non-invertible system.
struct CanonicalHeightResult {
    RationalInterval hhat_plus;
    RationalInterval hhat_minus;
    RationalInterval hhat;
    TateResult plus;
    std::optional<TateResult> minus;
    long iterations = 0;
    Rational tate_constant;  // the larger of the two estimates
    Rational error_bound;    // sum of the two bounds
    bool one_sided = false;

    // Inputs, kept so derived quantities can be recomputed at f^n(P).
    std::vector<RationalInterval> weights_plus;
    std::vector<RationalInterval> weights_minus;
    RealAlgebraicNumber lambda;
    OrbitOptions options;
};

inline CanonicalHeightResult canonical_pair(const System& system, const MultiProjPoint& p,
                                            const std::vector<RationalInterval>& nu_plus,
                                            const std::vector<RationalInterval>& nu_minus, const RealAlgebraicNumber& lambda,
                                            long N, const OrbitOptions& opt = {}) {
    if (!is_invertible(system)) throw PreconditionError("canonical pairs need an automorphism");
    TateResult plus = tate_limit(system, p, nu_plus, lambda, N, Direction::Forward, opt);
    TateResult minus = tate_limit(system, p, nu_minus, lambda, N, Direction::Backward, opt);
    CanonicalHeightResult r{plus.enclosure,
                            minus.enclosure,
                            plus.enclosure + minus.enclosure,
                            plus,
                            minus,
                            N,
                            std::max(plus.tate_constant, minus.tate_constant),
                            plus.error_bound + minus.error_bound,
                            false,
                            nu_plus,
                            nu_minus,
                            lambda,
                            opt};
    return r;
}

/// Needs Condition A: lambda(f) = lambda(f^{-1}) > 1.
inline CanonicalHeightResult canonical_pair(const System& system, const MultiProjPoint& p, const EigenvectorPair& pair,
                                            long N, const OrbitOptions& opt = {}) {
    if (compare(pair.lambda_plus, pair.lambda_minus) != Ordering::Equal)
        throw PreconditionError("canonical pairs need lambda(f) = lambda(f^-1)");
    return canonical_pair(system, p, weight_enclosure(pair.nu_plus), weight_enclosure(pair.nu_minus), pair.lambda_plus, N,
                          opt);
}

/// Forward canonical height only, with h- := 0.
inline CanonicalHeightResult canonical_forward(const System& system, const MultiProjPoint& p,
                                               const std::vector<RationalInterval>& weights, const RealAlgebraicNumber& lambda,
                                               long N, const OrbitOptions& opt = {}) {
    TateResult plus = tate_limit(system, p, weights, lambda, N, Direction::Forward, opt);
    RationalInterval zero(Rational(0));
    return {plus.enclosure, zero, plus.enclosure, plus, std::nullopt, N, plus.tate_constant, plus.error_bound, true,
            weights, {}, lambda, opt};
}

/// h(f^n P) + h(f^-n P) - (lambda^n + lambda^-n) h(P) from canonical heights
/// recomputed at the same N; one-sided results use h(f^n P) - lambda^n h(P).
inline RationalInterval functional_equation_residual(const System& system, const MultiProjPoint& p,
                                                     const CanonicalHeightResult& result, long n) {
    if (n == 0) return RationalInterval(Rational(0));
    RationalInterval lam = detail::lambda_enclosure(result.lambda);
    unsigned k = static_cast<unsigned>(n < 0 ? -n : n);
    RationalInterval lam_k = pow(lam, k);
    auto at = [&](const MultiProjPoint& q) {
        return result.one_sided
                   ? canonical_forward(system, q, result.weights_plus, result.lambda, result.iterations, result.options)
                   : canonical_pair(system, q, result.weights_plus, result.weights_minus, result.lambda, result.iterations,
                                    result.options);
    };
    if (result.one_sided) {
        if (n < 0) throw PreconditionError("one-sided canonical heights only move forward");
        MultiProjPoint q = p;
        for (unsigned i = 0; i < k; ++i) q = apply(system, q);
        return (at(q).hhat - lam_k * result.hhat).rounded_out(256);
    }
    System inv = inverse_system(system);
    MultiProjPoint fwd = p, bwd = p;
    for (unsigned i = 0; i < k; ++i) {
        fwd = apply(system, fwd);
        bwd = apply(inv, bwd);
    }
    RationalInterval coeff = lam_k + RationalInterval(Rational(1)) / lam_k;
    return (at(fwd).hhat + at(bwd).hhat - coeff * result.hhat).rounded_out(256);
}

} // namespace arithdyn
