#pragma once

#include <mpfr.h>

#include <optional>
#include <string>
#include <vector>

#include "arithdyn/exactreal/bigint.hpp"
#include "arithdyn/exactreal/interval.hpp"
#include "arithdyn/exactreal/polynomial.hpp"

namespace arithdyn {

enum class Ordering { Less, Equal, Greater };

inline const char* to_string(Ordering o) {
    switch (o) {
    case Ordering::Less: return "Less";
    case Ordering::Equal: return "Equal";
    case Ordering::Greater: return "Greater";
    }
    return "?";
}

/// A real root of a squarefree integer polynomial, designated by a closed
/// rational interval containing no other root.
///
/// Either the interval is a single rational point (a rational root) or
/// neither endpoint is a root, in which case p changes sign across it.
/// The polynomial is primitive with positive leading coefficient.
class RealAlgebraicNumber {
public:
    RealAlgebraicNumber(const IntPolynomial& p, const RationalInterval& iv)
        : p_(normalize_sign(squarefree_part(p))), iv_(iv) {
        if (p_.degree() < 1) throw InvalidInput("algebraic number needs a nonconstant polynomial");
        normalize();
    }

    static RealAlgebraicNumber from_rational(const Rational& q) {
        IntPolynomial p{Integer(-q.get_num()), Integer(q.get_den())};
        return RealAlgebraicNumber(p, RationalInterval(q), Trusted{});
    }

    const IntPolynomial& poly() const { return p_; }
    const RationalInterval& interval() const { return iv_; }
    bool is_rational() const { return iv_.is_point(); }
    /// The exact value when rational.
    std::optional<Rational> as_rational() const {
        if (is_rational()) return iv_.lo();
        return std::nullopt;
    }

    /// Bisect until the isolating interval has width at most eps.
    RealAlgebraicNumber refined(const Rational& eps) const {
        if (sgn(eps) <= 0) throw InvalidInput("refinement width must be positive");
        RealAlgebraicNumber r = *this;
        while (!r.iv_.is_point() && r.iv_.width() > eps) r.bisect();
        return r;
    }

    /// One bisection step (halves the width or pins a rational root).
    RealAlgebraicNumber halved() const {
        RealAlgebraicNumber r = *this;
        if (!r.iv_.is_point()) r.bisect();
        return r;
    }

    double to_double() const {
        auto r = refined(Rational(1, 1) / Rational(Integer(1) << 60));
        return r.iv_.mid().get_d();
    }

    /// Compact decimal approximation for display.
    std::string str(int digits = 12) const;

private:
    struct Trusted {};
    RealAlgebraicNumber(IntPolynomial p, RationalInterval iv, Trusted) : p_(std::move(p)), iv_(std::move(iv)) {}
    friend RealAlgebraicNumber make_trusted_ran(IntPolynomial p, RationalInterval iv);

    int count_closed(const SturmSequence& s) const {
        return s.count_roots(iv_.lo(), iv_.hi()) + (sign_at(p_, iv_.lo()) == 0 ? 1 : 0);
    }

    void normalize() {
        if (p_.degree() == 1) {
            Rational r = make_rational(-p_.coeff(0), p_.coeff(1));
            if (!iv_.contains(r)) throw InvalidInput("interval does not contain the root");
            iv_ = RationalInterval(r);
            return;
        }
        if (iv_.is_point()) {
            if (sign_at(p_, iv_.lo()) != 0) throw InvalidInput("point interval is not a root");
            return;
        }
        SturmSequence s(p_);
        if (count_closed(s) != 1) throw InvalidInput("interval does not isolate exactly one root");
        if (sign_at(p_, iv_.lo()) == 0) {
            iv_ = RationalInterval(iv_.lo());
        } else if (sign_at(p_, iv_.hi()) == 0) {
            iv_ = RationalInterval(iv_.hi());
        }
    }

    void bisect() {
        Rational m = iv_.mid();
        int sm = sign_at(p_, m);
        if (sm == 0) {
            iv_ = RationalInterval(m);
            return;
        }
        if (sm == sign_at(p_, iv_.lo()))
            iv_ = RationalInterval(m, iv_.hi());
        else
            iv_ = RationalInterval(iv_.lo(), m);
    }

    IntPolynomial p_;
    RationalInterval iv_;
};

inline RealAlgebraicNumber make_trusted_ran(IntPolynomial p, RationalInterval iv) {
    return RealAlgebraicNumber(std::move(p), std::move(iv), RealAlgebraicNumber::Trusted{});
}

inline RationalInterval refine(const RealAlgebraicNumber& x, const Rational& eps) {
    return x.refined(eps).interval();
}

/// All real roots of p in ascending order, each with an isolating interval.
inline std::vector<RealAlgebraicNumber> isolate_real_roots(const IntPolynomial& p) {
    if (p.is_zero()) throw InvalidInput("root isolation of the zero polynomial");
    IntPolynomial q = normalize_sign(squarefree_part(p));
    std::vector<RealAlgebraicNumber> out;
    if (q.degree() < 1) return out;
    if (q.degree() == 1) {
        out.push_back(RealAlgebraicNumber::from_rational(make_rational(-q.coeff(0), q.coeff(1))));
        return out;
    }
    SturmSequence s(q);
    Rational b(cauchy_bound(q));

    // Work list of half-open (lo, hi] cells, processed left to right.
    struct Cell {
        Rational lo, hi;
        int count;
    };
    std::vector<Cell> stack{{-b, b, s.count_roots(-b, b)}};
    while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        if (c.count == 0) continue;
        if (c.count == 1) {
            Rational lo = c.lo, hi = c.hi;
            for (;;) {
                if (sign_at(q, hi) == 0) {
                    out.push_back(make_trusted_ran(q, RationalInterval(hi)));
                    break;
                }
                if (sign_at(q, lo) != 0) {
                    out.push_back(make_trusted_ran(q, RationalInterval(lo, hi)));
                    break;
                }
                Rational m = (lo + hi) / 2;
                if (s.count_roots(m, hi) == 1)
                    lo = m;
                else
                    hi = m;
            }
            continue;
        }
        Rational m = (c.lo + c.hi) / 2;
        int right = s.count_roots(m, c.hi);
        // Push right first so the left half is handled first.
        stack.push_back({m, c.hi, right});
        stack.push_back({c.lo, m, c.count - right});
    }
    // Neighbouring closed intervals may share an endpoint; separate them.
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        while (out[i].interval().hi() >= out[i + 1].interval().lo()) {
            out[i] = out[i].halved();
            out[i + 1] = out[i + 1].halved();
        }
    }
    return out;
}

/// Rational roots of p, ascending. A root x = a/b has b | lc(p), so lc(p) x
/// is an integer; each real root is refined until that integer is unique.
inline std::vector<Rational> rational_roots(const IntPolynomial& p) {
    std::vector<Rational> out;
    IntPolynomial q = normalize_sign(squarefree_part(p));
    if (q.degree() < 1) return out;
    Integer lc = abs(q.leading());
    for (const auto& r : isolate_real_roots(q)) {
        if (auto x = r.as_rational()) {
            out.push_back(*x);
            continue;
        }
        RationalInterval iv = refine(r, Rational(1) / Rational(4 * lc));
        Rational y = iv.mid() * Rational(lc);
        Integer k = floor(Rational(y + Rational(1, 2)));
        Rational cand = make_rational(k, lc);
        if (sign_at(q, cand) == 0) out.push_back(cand);
    }
    return out;
}

/// p = c prod (b_i t - a_i)^{e_i} rest for a rational c, rest free of
/// rational roots.
struct RationalSplit {
    std::vector<std::pair<IntPolynomial, unsigned>> linear;
    IntPolynomial rest;
};

inline RationalSplit split_rational_roots(const IntPolynomial& p) {
    if (p.is_zero()) throw InvalidInput("splitting the zero polynomial");
    RationalSplit s{{}, p};
    for (const auto& x : rational_roots(p)) {
        IntPolynomial lin{Integer(-x.get_num()), Integer(x.get_den())};
        unsigned e = 0;
        while (divides(lin, s.rest)) {
            s.rest = exact_quotient(s.rest, lin);
            ++e;
        }
        s.linear.emplace_back(lin, e);
    }
    return s;
}

/// The factor of x's polynomial that carries x after removing rational
/// roots: linear when x is rational, otherwise free of rational roots.
inline IntPolynomial defining_factor(const RealAlgebraicNumber& x) {
    if (auto q = x.as_rational()) return IntPolynomial{Integer(-q->get_num()), Integer(q->get_den())};
    return normalize_sign(squarefree_part(split_rational_roots(x.poly()).rest));
}

namespace detail {

inline int count_roots_closed(const IntPolynomial& g, const RationalInterval& iv) {
    if (g.degree() < 1) return 0;
    if (iv.is_point()) return sign_at(g, iv.lo()) == 0 ? 1 : 0;
    SturmSequence s(g);
    return s.count_roots(iv.lo(), iv.hi()) + (sign_at(g, iv.lo()) == 0 ? 1 : 0);
}

} // namespace detail

/// Exact ordering. Equality is certified by a common factor of the defining
/// polynomials having a root in the overlap of the isolating intervals.
inline Ordering compare(const RealAlgebraicNumber& x, const RealAlgebraicNumber& y) {
    if (x.is_rational() && y.is_rational()) {
        const Rational& a = x.interval().lo();
        const Rational& b = y.interval().lo();
        return a < b ? Ordering::Less : (a > b ? Ordering::Greater : Ordering::Equal);
    }
    RealAlgebraicNumber a = x, b = y;
    bool equality_checked = false;
    for (;;) {
        if (a.interval().hi() < b.interval().lo()) return Ordering::Less;
        if (b.interval().hi() < a.interval().lo()) return Ordering::Greater;
        if (!equality_checked) {
            IntPolynomial g = gcd(a.poly(), b.poly());
            if (g.degree() >= 1) {
                RationalInterval common = intersect(a.interval(), b.interval());
                if (detail::count_roots_closed(g, common) > 0) return Ordering::Equal;
            }
            // Unequal now means unequal forever; only refinement remains.
            equality_checked = true;
        }
        if (a.interval().width() >= b.interval().width())
            a = a.halved();
        else
            b = b.halved();
    }
}

inline Ordering compare(const RealAlgebraicNumber& x, const Rational& q) {
    return compare(x, RealAlgebraicNumber::from_rational(q));
}

inline bool operator==(const RealAlgebraicNumber& x, const RealAlgebraicNumber& y) { return compare(x, y) == Ordering::Equal; }
inline bool operator<(const RealAlgebraicNumber& x, const RealAlgebraicNumber& y) { return compare(x, y) == Ordering::Less; }
inline bool operator>(const RealAlgebraicNumber& x, const RealAlgebraicNumber& y) { return compare(x, y) == Ordering::Greater; }

inline int sign(const RealAlgebraicNumber& x) {
    switch (compare(x, Rational(0))) {
    case Ordering::Less: return -1;
    case Ordering::Equal: return 0;
    case Ordering::Greater: return 1;
    }
    return 0;
}

/// Exact sign of q at x.
inline int sign_at(const IntPolynomial& q, const RealAlgebraicNumber& x) {
    if (q.is_zero()) return 0;
    if (x.is_rational()) return sign_at(q, x.interval().lo());
    IntPolynomial g = gcd(q, x.poly());
    if (g.degree() >= 1 && detail::count_roots_closed(g, x.interval()) > 0) return 0;
    RealAlgebraicNumber r = x;
    for (;;) {
        RationalInterval v = evaluate(q, r.interval());
        if (v.positive()) return 1;
        if (v.negative()) return -1;
        r = r.halved();
        if (r.is_rational()) return sign_at(q, r.interval().lo());
    }
}

inline RealAlgebraicNumber max(const RealAlgebraicNumber& a, const RealAlgebraicNumber& b) {
    return compare(a, b) == Ordering::Less ? b : a;
}

namespace detail {

/// Exact k-th root of a nonnegative integer, if one exists.
inline std::optional<Integer> exact_root(const Integer& n, unsigned long k) {
    Integer r;
    if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) != 0) return r;
    return std::nullopt;
}

} // namespace detail

/// The positive real k-th root of a positive rational.
inline RealAlgebraicNumber kth_root(const Rational& x, unsigned k) {
    if (k == 0) throw InvalidInput("kth_root with k = 0");
    if (sgn(x) <= 0) throw DomainError("kth_root of a non-positive number");
    auto rn = detail::exact_root(x.get_num(), k);
    auto rd = detail::exact_root(x.get_den(), k);
    if (rn && rd) return RealAlgebraicNumber::from_rational(make_rational(*rn, *rd));
    // den * t^k - num; its unique positive root lies in (0, max(1, x)].
    IntPolynomial p = IntPolynomial::monomial(x.get_den(), k) - IntPolynomial::constant(x.get_num());
    Rational hi = x > 1 ? x : Rational(1);
    return RealAlgebraicNumber(p, RationalInterval(Rational(0), hi));
}

/// The positive real k-th root of a positive real algebraic number; its
/// defining polynomial is p(t^k), squarefree-reduced.
inline RealAlgebraicNumber kth_root(const RealAlgebraicNumber& x, unsigned k) {
    if (k == 0) throw InvalidInput("kth_root with k = 0");
    if (sign(x) <= 0) throw DomainError("kth_root of a non-positive number");
    if (auto q = x.as_rational()) return kth_root(*q, k);
    if (k == 1) return x;
    RealAlgebraicNumber a = x;
    while (sgn(a.interval().lo()) <= 0) a = a.halved();
    if (auto q = a.as_rational()) return kth_root(*q, k);
    // t -> t^k is increasing on (0, inf), so the rank of x among the positive
    // roots of p equals the rank of its k-th root among positive roots of p(t^k).
    SturmSequence s(a.poly());
    int rank = s.count_roots(Rational(0), a.interval().lo());
    IntPolynomial q = a.poly().compose_power(k);
    int seen = 0;
    for (const auto& r : isolate_real_roots(q)) {
        if (sign(r) <= 0) continue;
        if (seen++ == rank) return r;
    }
    throw InvariantViolation("kth_root: positive branch not found");
}

/// Enclosure of x of width at most eps.
inline RationalInterval enclose(const RealAlgebraicNumber& x, const Rational& eps) { return refine(x, eps); }

inline std::string RealAlgebraicNumber::str(int digits) const {
    if (auto q = as_rational()) return to_string(*q);
    Rational eps = Rational(1) / Rational(ipow(Integer(10), static_cast<unsigned long>(digits + 1)));
    RationalInterval iv = refine(*this, eps);
    mpfr_t v;
    mpfr_init2(v, 256);
    mpfr_set_q(v, iv.mid().get_mpq_t(), MPFR_RNDN);
    char buf[128];
    mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, v);
    mpfr_clear(v);
    return buf;
}

} // namespace arithdyn
