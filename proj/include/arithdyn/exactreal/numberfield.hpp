#pragma once

#include <memory>
#include <string>
#include <tuple>

#include "arithdyn/exactreal/algebraic.hpp"

namespace arithdyn {

/// Q(alpha) presented as Q[t]/(m) with alpha a designated real root of the
/// squarefree polynomial m. m need not be irreducible: zero tests go through
/// the root alpha, and a zero divisor splits m down to the factor vanishing
/// at alpha.
struct NumberField {
    IntPolynomial modulus;
    RealAlgebraicNumber alpha;

    explicit NumberField(const RealAlgebraicNumber& a) : modulus(a.poly()), alpha(a) {}
    NumberField(IntPolynomial m, const RealAlgebraicNumber& a)
        : modulus(normalize_sign(std::move(m))), alpha(modulus, a.interval()) {}
};

using FieldPtr = std::shared_ptr<const NumberField>;

/// (g, s, u) with s*a + u*b = g = gcd(a, b), g monic.
inline std::tuple<RatPolynomial, RatPolynomial, RatPolynomial> xgcd(const RatPolynomial& a, const RatPolynomial& b) {
    RatPolynomial r0 = a, r1 = b, s0{Rational(1)}, s1, u0, u1{Rational(1)};
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = std::exchange(r1, r);
        s0 = std::exchange(s1, s0 - q * s1);
        u0 = std::exchange(u1, u0 - q * u1);
    }
    if (r0.is_zero()) return {r0, s0, u0};
    Rational inv = 1 / r0.leading();
    return {inv * r0, inv * s0, inv * u0};
}

/// An element of Q(alpha), or a plain rational when no field is attached.
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(const Rational& q) : rep_(RatPolynomial::constant(q)) {}  // NOLINT: implicit by design
    FieldElement(long q) : FieldElement(Rational(q)) {}                     // NOLINT
    FieldElement(FieldPtr k, RatPolynomial rep) : k_(std::move(k)), rep_(std::move(rep)) { reduce(); }

    static FieldElement generator(FieldPtr k) { return FieldElement(std::move(k), RatPolynomial::variable()); }

    const FieldPtr& field() const { return k_; }
    const RatPolynomial& rep() const { return rep_; }

    /// Exact zero test at alpha.
    bool is_zero() const { return sign() == 0; }

    int sign() const {
        if (rep_.is_zero()) return 0;
        if (rep_.degree() == 0) return sgn(rep_.leading());
        return sign_at(primitive_integer(rep_), k_->alpha);
    }

    FieldElement operator-() const { return FieldElement(k_, -rep_, Raw{}); }
    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        FieldPtr k = unify(a.k_, b.k_);
        return FieldElement(k, a.rep_ + b.rep_);
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        FieldPtr k = unify(a.k_, b.k_);
        return FieldElement(k, a.rep_ * b.rep_);
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }
    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
    FieldElement& operator/=(const FieldElement& o) { return *this = *this / o; }

    friend bool operator==(const FieldElement& a, const FieldElement& b) { return (a - b).is_zero(); }

    /// Multiplicative inverse; may return an element of a smaller presentation
    /// of the same field when rep shares a factor with the modulus.
    FieldElement inverse() const {
        if (is_zero()) throw DomainError("inverse of zero in Q(alpha)");
        if (rep_.degree() == 0) return FieldElement(k_, RatPolynomial::constant(1 / rep_.leading()), Raw{});
        FieldPtr k = k_;
        IntPolynomial r = primitive_integer(rep_);
        IntPolynomial g = gcd(r, k->modulus);
        if (g.degree() >= 1) k = std::make_shared<NumberField>(exact_quotient(k->modulus, g), k->alpha);
        auto [d, s, u] = xgcd(rep_, to_rational(k->modulus));
        if (d.degree() != 0) throw InvariantViolation("inverse: modulus split failed");
        return FieldElement(k, s);
    }

    /// Interval containing the value, of width at most eps.
    RationalInterval enclose(const Rational& eps) const {
        if (rep_.degree() <= 0) return RationalInterval(rep_.coeff(0));
        Rational w = eps;
        RealAlgebraicNumber a = k_->alpha;
        for (;;) {
            a = a.refined(w);
            RationalInterval v = evaluate(rep_, a.interval());
            if (v.width() <= eps) return v;
            w /= 16;
        }
    }

    double to_double() const { return enclose(pow2(-60)).mid().get_d(); }

private:
    struct Raw {};
    FieldElement(FieldPtr k, RatPolynomial rep, Raw) : k_(std::move(k)), rep_(std::move(rep)) {}

    static FieldPtr unify(const FieldPtr& a, const FieldPtr& b) {
        if (!a) return b;
        if (!b || a == b) return a;
        if (compare(a->alpha, b->alpha) != Ordering::Equal) throw InvalidInput("elements of different number fields");
        if (a->modulus == b->modulus) return a;
        IntPolynomial g = gcd(a->modulus, b->modulus);
        if (g == a->modulus) return a;
        if (g == b->modulus) return b;
        return std::make_shared<NumberField>(g, a->alpha);
    }

    void reduce() {
        if (k_ && rep_.degree() >= k_->modulus.degree()) rep_ = rep_ % to_rational(k_->modulus);
    }

    FieldPtr k_;
    RatPolynomial rep_;
};

inline int sgn(const FieldElement& x) { return x.sign(); }

inline std::string to_string(const FieldElement& x) {
    if (!x.field()) return to_string(x.rep().coeff(0));
    return to_string(x.rep(), "a");
}

} // namespace arithdyn
