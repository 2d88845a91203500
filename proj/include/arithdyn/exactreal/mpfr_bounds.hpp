#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>

#include "arithdyn/exactreal/interval.hpp"

namespace arithdyn {

namespace detail {

class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    Rational to_rational() const {
        Rational q;
        mpfr_get_q(q.get_mpq_t(), v_);
        return q;
    }

private:
    mpfr_t v_;
};

} // namespace detail

/// Working precision (bits) that gives relative error below `rel`.
inline mpfr_prec_t precision_for(const Rational& rel) {
    if (sgn(rel) <= 0) throw InvalidInput("precision must be positive");
    double r = std::max(rel.get_d(), 1e-300);
    long bits = static_cast<long>(std::ceil(-std::log2(r))) + 16;
    return static_cast<mpfr_prec_t>(std::clamp(bits, 64L, 4096L));
}

/// Rigorous enclosure of log(n) for a positive integer n.
inline RationalInterval log_enclosure(const Integer& n, mpfr_prec_t prec) {
    if (sgn(n) <= 0) throw DomainError("log of a non-positive integer");
    if (n == 1) return RationalInterval(Rational(0));
    detail::Mpfr x(prec), lo(prec), hi(prec);
    mpfr_set_z(x.get(), n.get_mpz_t(), MPFR_RNDD);
    mpfr_log(lo.get(), x.get(), MPFR_RNDD);
    mpfr_set_z(x.get(), n.get_mpz_t(), MPFR_RNDU);
    mpfr_log(hi.get(), x.get(), MPFR_RNDU);
    return {lo.to_rational(), hi.to_rational()};
}

/// Rigorous enclosure of the real k-th root of every member of a
/// nonnegative interval.
inline RationalInterval root_enclosure(const RationalInterval& x, unsigned long k, mpfr_prec_t prec) {
    if (k == 0) throw InvalidInput("root of order 0");
    if (x.negative()) throw DomainError("root of a negative interval");
    if (k == 1) return x;
    detail::Mpfr a(prec), lo(prec), hi(prec);
    Rational base_lo = std::max(x.lo(), Rational(0));
    mpfr_set_q(a.get(), base_lo.get_mpq_t(), MPFR_RNDD);
    mpfr_rootn_ui(lo.get(), a.get(), k, MPFR_RNDD);
    mpfr_set_q(a.get(), x.hi().get_mpq_t(), MPFR_RNDU);
    mpfr_rootn_ui(hi.get(), a.get(), k, MPFR_RNDU);
    return {lo.to_rational(), hi.to_rational()};
}

/// Enclosure of log over a positive interval.
inline RationalInterval log_enclosure(const RationalInterval& x, mpfr_prec_t prec) {
    if (!x.positive()) throw DomainError("log of a non-positive interval");
    detail::Mpfr a(prec), lo(prec), hi(prec);
    mpfr_set_q(a.get(), x.lo().get_mpq_t(), MPFR_RNDD);
    mpfr_log(lo.get(), a.get(), MPFR_RNDD);
    mpfr_set_q(a.get(), x.hi().get_mpq_t(), MPFR_RNDU);
    mpfr_log(hi.get(), a.get(), MPFR_RNDU);
    return {lo.to_rational(), hi.to_rational()};
}

} // namespace arithdyn
