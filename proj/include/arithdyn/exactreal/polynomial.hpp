#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "arithdyn/exactreal/bigint.hpp"
#include "arithdyn/exactreal/interval.hpp"

namespace arithdyn {

/// Dense univariate polynomial, constant term first. Trailing zero
/// coefficients are never stored, so the zero polynomial has no coefficients.
template <class T>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

    static Polynomial constant(const T& a) { return Polynomial(std::vector<T>{a}); }
    static Polynomial monomial(const T& a, std::size_t deg) {
        std::vector<T> c(deg + 1, T(0));
        c[deg] = a;
        return Polynomial(std::move(c));
    }
    /// The polynomial t.
    static Polynomial variable() { return monomial(T(1), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<T>& coeffs() const { return c_; }
    T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }
    const T& leading() const {
        if (c_.empty()) throw DomainError("leading coefficient of the zero polynomial");
        return c_.back();
    }

    Polynomial operator-() const {
        std::vector<T> c(c_);
        for (auto& x : c) x = -x;
        return Polynomial(std::move(c));
    }
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<T> c(std::max(a.c_.size(), b.c_.size()), T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const T& s, const Polynomial& a) {
        std::vector<T> c(a.c_);
        for (auto& x : c) x *= s;
        return Polynomial(std::move(c));
    }
    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    Polynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<T> c(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * T(static_cast<long>(i));
        return Polynomial(std::move(c));
    }

    /// p(t^k).
    Polynomial compose_power(unsigned k) const {
        if (k == 0) throw InvalidInput("compose_power with k = 0");
        if (c_.empty()) return {};
        std::vector<T> c((c_.size() - 1) * k + 1, T(0));
        for (std::size_t i = 0; i < c_.size(); ++i) c[i * k] = c_[i];
        return Polynomial(std::move(c));
    }

    /// p(-t).
    Polynomial reflect() const {
        std::vector<T> c(c_);
        for (std::size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
        return Polynomial(std::move(c));
    }

    /// p(q(t)).
    Polynomial compose(const Polynomial& q) const {
        Polynomial r;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * q + constant(c_[i]);
        return r;
    }

    /// Horner evaluation in any ring U that accepts T coefficients.
    template <class U>
    U evaluate(const U& x) const {
        U acc(T(0));
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + U(c_[i]);
        return acc;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<T> c_;
};

using IntPolynomial = Polynomial<Integer>;
using RatPolynomial = Polynomial<Rational>;

inline RatPolynomial to_rational(const IntPolynomial& p) {
    std::vector<Rational> c;
    c.reserve(p.coeffs().size());
    for (const auto& a : p.coeffs()) c.emplace_back(a);
    return RatPolynomial(std::move(c));
}

inline Integer content(const IntPolynomial& p) {
    Integer g = 0;
    for (const auto& a : p.coeffs()) g = gcd(g, a);
    return g;
}

/// p divided by its (positive) content; the sign of every coefficient is kept.
inline IntPolynomial primitive_part(const IntPolynomial& p) {
    if (p.is_zero()) return p;
    Integer g = content(p);
    std::vector<Integer> c(p.coeffs());
    for (auto& a : c) a /= g;
    return IntPolynomial(std::move(c));
}

/// Positive rational multiple of p that is a primitive integer polynomial.
inline IntPolynomial primitive_integer(const RatPolynomial& p) {
    if (p.is_zero()) return {};
    Integer l = 1;
    for (const auto& a : p.coeffs()) l = lcm(l, a.get_den());
    std::vector<Integer> c;
    c.reserve(p.coeffs().size());
    for (const auto& a : p.coeffs()) c.emplace_back(a.get_num() * (l / a.get_den()));
    return primitive_part(IntPolynomial(std::move(c)));
}

/// Primitive, positive leading coefficient: the canonical associate over Z.
inline IntPolynomial normalize_sign(const IntPolynomial& p) {
    IntPolynomial q = primitive_part(p);
    if (!q.is_zero() && sgn(q.leading()) < 0) return -q;
    return q;
}

inline std::pair<RatPolynomial, RatPolynomial> divmod(const RatPolynomial& a, const RatPolynomial& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    std::vector<Rational> r(a.coeffs());
    int db = b.degree();
    int da = a.degree();
    if (da < db) return {RatPolynomial{}, a};
    std::vector<Rational> q(static_cast<std::size_t>(da - db + 1), Rational(0));
    const Rational& lb = b.leading();
    for (int i = da; i >= db; --i) {
        Rational f = r[static_cast<std::size_t>(i)] / lb;
        if (f == 0) continue;
        q[static_cast<std::size_t>(i - db)] = f;
        for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= f * b.coeffs()[static_cast<std::size_t>(j)];
    }
    return {RatPolynomial(std::move(q)), RatPolynomial(std::move(r))};
}

inline RatPolynomial operator%(const RatPolynomial& a, const RatPolynomial& b) { return divmod(a, b).second; }

/// Greatest common divisor over Q, returned as a primitive integer polynomial
/// with positive leading coefficient (zero if both inputs are zero).
inline IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b) {
    IntPolynomial x = primitive_part(a), y = primitive_part(b);
    while (!y.is_zero()) {
        IntPolynomial r = primitive_integer(to_rational(x) % to_rational(y));
        x = std::move(y);
        y = std::move(r);
    }
    return normalize_sign(x);
}

/// Exact quotient a / b over Q, scaled to a primitive integer polynomial.
/// Throws if b does not divide a.
inline IntPolynomial exact_quotient(const IntPolynomial& a, const IntPolynomial& b) {
    auto [q, r] = divmod(to_rational(a), to_rational(b));
    if (!r.is_zero()) throw InvariantViolation("exact_quotient: nonzero remainder");
    return normalize_sign(primitive_integer(q));
}

inline bool divides(const IntPolynomial& b, const IntPolynomial& a) {
    return (to_rational(a) % to_rational(b)).is_zero();
}

inline IntPolynomial squarefree_part(const IntPolynomial& p) {
    if (p.is_zero()) throw InvalidInput("squarefree part of the zero polynomial");
    if (p.degree() == 0) return IntPolynomial{Integer(1)};
    IntPolynomial g = gcd(p, p.derivative());
    return exact_quotient(p, g);
}

/// Exact sign of p(x): evaluates the homogenized form num^i den^(d-i).
inline int sign_at(const IntPolynomial& p, const Rational& x) {
    if (p.is_zero()) return 0;
    const Integer& a = x.get_num();
    const Integer& b = x.get_den();
    Integer acc = 0;
    Integer bpow = 1;
    // acc = sum c_i a^i b^(d-i), Horner in a with running powers of b.
    for (std::size_t i = p.coeffs().size(); i-- > 0;) {
        acc = acc * a + p.coeffs()[i] * bpow;
        bpow *= b;
    }
    return sgn(acc);
}

inline Rational evaluate(const IntPolynomial& p, const Rational& x) {
    Rational acc = 0;
    for (std::size_t i = p.coeffs().size(); i-- > 0;) acc = acc * x + p.coeffs()[i];
    return acc;
}

inline RationalInterval evaluate(const IntPolynomial& p, const RationalInterval& x) {
    RationalInterval acc(Rational(0));
    for (std::size_t i = p.coeffs().size(); i-- > 0;) acc = acc * x + Rational(p.coeffs()[i]);
    return acc;
}

inline RationalInterval evaluate(const RatPolynomial& p, const RationalInterval& x) {
    RationalInterval acc(Rational(0));
    for (std::size_t i = p.coeffs().size(); i-- > 0;) acc = acc * x + p.coeffs()[i];
    return acc;
}

/// Every root z satisfies |z| < bound (Cauchy).
inline Integer cauchy_bound(const IntPolynomial& p) {
    if (p.degree() < 1) return Integer(1);
    Integer lead = abs(p.leading());
    Integer m = 0;
    for (int i = 0; i < p.degree(); ++i) m = std::max(m, Integer(abs(p.coeffs()[static_cast<std::size_t>(i)])));
    return ceil_div(m, lead) + 1;
}

template <class T>
std::string to_string(const Polynomial<T>& p, const std::string& var = "t") {
    if (p.is_zero()) return "0";
    std::string out;
    for (int i = p.degree(); i >= 0; --i) {
        T a = p.coeff(static_cast<std::size_t>(i));
        if (a == 0) continue;
        bool neg = sgn(a) < 0;
        T mag = neg ? T(-a) : a;
        if (out.empty()) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        bool unit = mag == 1;
        if (!unit || i == 0) out += to_string(mag);
        if (i >= 1) {
            if (!unit) out += "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

/// Sturm sequence of a squarefree polynomial: p, p', -rem(p, p'), ...
class SturmSequence {
public:
    explicit SturmSequence(const IntPolynomial& p) {
        if (p.is_zero()) throw InvalidInput("Sturm sequence of the zero polynomial");
        seq_.push_back(primitive_part(p));
        IntPolynomial d = primitive_part(p.derivative());
        if (d.is_zero()) return;
        seq_.push_back(d);
        for (;;) {
            const auto& a = seq_[seq_.size() - 2];
            const auto& b = seq_[seq_.size() - 1];
            RatPolynomial r = to_rational(a) % to_rational(b);
            if (r.is_zero()) break;
            seq_.push_back(-primitive_integer(r));
        }
    }

    const std::vector<IntPolynomial>& polys() const { return seq_; }

    int variations_at(const Rational& x) const {
        std::vector<int> s;
        for (const auto& q : seq_) s.push_back(sign_at(q, x));
        return count(s);
    }
    int variations_at_pos_inf() const {
        std::vector<int> s;
        for (const auto& q : seq_) s.push_back(sgn(q.leading()));
        return count(s);
    }
    int variations_at_neg_inf() const {
        std::vector<int> s;
        for (const auto& q : seq_) s.push_back(q.degree() % 2 == 0 ? sgn(q.leading()) : -sgn(q.leading()));
        return count(s);
    }

    /// Number of distinct roots in the half-open interval (a, b].
    int count_roots(const Rational& a, const Rational& b) const {
        if (b <= a) return 0;
        return variations_at(a) - variations_at(b);
    }
    int count_all_roots() const { return variations_at_neg_inf() - variations_at_pos_inf(); }

private:
    static int count(const std::vector<int>& s) {
        int last = 0, v = 0;
        for (int x : s) {
            if (x == 0) continue;
            if (last != 0 && x != last) ++v;
            last = x;
        }
        return v;
    }
    std::vector<IntPolynomial> seq_;
};

} // namespace arithdyn
