#pragma once

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <string>

#include "arithdyn/exactreal/bigint.hpp"

namespace arithdyn {

/// Closed interval [lo, hi] with exact rational endpoints. Every operation
/// returns an interval containing all results of the exact operation on
/// members of the operands.
class RationalInterval {
public:
    RationalInterval() : lo_(0), hi_(0) {}
    explicit RationalInterval(const Rational& x) : lo_(x), hi_(x) {}
    RationalInterval(const Rational& lo, const Rational& hi) : lo_(lo), hi_(hi) {
        if (hi_ < lo_) throw InvalidInput("interval with lo > hi");
    }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Rational width() const { return hi_ - lo_; }
    Rational mid() const { return (lo_ + hi_) / 2; }
    bool is_point() const { return lo_ == hi_; }

    bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const RationalInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool contains_zero() const { return sgn(lo_) <= 0 && sgn(hi_) >= 0; }
    bool excludes_zero() const { return !contains_zero(); }
    bool positive() const { return sgn(lo_) > 0; }
    bool negative() const { return sgn(hi_) < 0; }
    bool overlaps(const RationalInterval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }

    /// Largest absolute value of a member.
    Rational magnitude() const {
        Rational a = abs(lo_), b = abs(hi_);
        return std::max(a, b);
    }
    /// Smallest absolute value of a member.
    Rational mignitude() const {
        if (contains_zero()) return Rational(0);
        Rational a = abs(lo_), b = abs(hi_);
        return std::min(a, b);
    }

    RationalInterval operator-() const { return {-hi_, -lo_}; }

    friend RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) {
        return {a.lo_ + b.lo_, a.hi_ + b.hi_};
    }
    friend RationalInterval operator-(const RationalInterval& a, const RationalInterval& b) {
        return {a.lo_ - b.hi_, a.hi_ - b.lo_};
    }
    friend RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
        if (a.is_point() && b.is_point()) return RationalInterval(a.lo_ * b.lo_);
        Rational p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_, p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
        return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
    }
    friend RationalInterval operator*(const RationalInterval& a, const Rational& s) {
        if (sgn(s) >= 0) return {a.lo_ * s, a.hi_ * s};
        return {a.hi_ * s, a.lo_ * s};
    }
    friend RationalInterval operator*(const Rational& s, const RationalInterval& a) { return a * s; }
    friend RationalInterval operator+(const RationalInterval& a, const Rational& s) {
        return {a.lo_ + s, a.hi_ + s};
    }
    friend RationalInterval operator/(const RationalInterval& a, const RationalInterval& b) {
        if (b.contains_zero()) throw DomainError("interval division by an interval containing 0");
        return a * RationalInterval(1 / b.hi_, 1 / b.lo_);
    }
    friend RationalInterval operator/(const RationalInterval& a, const Rational& s) {
        if (s == 0) throw DomainError("interval division by 0");
        return a * Rational(1 / s);
    }
    RationalInterval& operator+=(const RationalInterval& o) { return *this = *this + o; }
    RationalInterval& operator-=(const RationalInterval& o) { return *this = *this - o; }
    RationalInterval& operator*=(const RationalInterval& o) { return *this = *this * o; }

    friend bool operator==(const RationalInterval& a, const RationalInterval& b) {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

    /// Outward rounding to multiples of 2^-bits; keeps denominators bounded.
    RationalInterval rounded_out(unsigned bits) const {
        return {dyadic_floor(lo_, bits), dyadic_ceil(hi_, bits)};
    }

    std::string str() const { return "[" + to_string(lo_) + ", " + to_string(hi_) + "]"; }

private:
    Rational lo_, hi_;
};

inline RationalInterval pow(const RationalInterval& x, unsigned e) {
    if (e == 0) return RationalInterval(Rational(1));
    Rational a = rpow(x.lo(), e), b = rpow(x.hi(), e);
    if (e % 2 == 1) return {a, b};
    if (x.contains_zero()) return {Rational(0), std::max(a, b)};
    return {std::min(a, b), std::max(a, b)};
}

inline RationalInterval abs(const RationalInterval& x) {
    if (sgn(x.lo()) >= 0) return x;
    if (sgn(x.hi()) <= 0) return -x;
    return {Rational(0), x.magnitude()};
}

inline RationalInterval max(const RationalInterval& a, const RationalInterval& b) {
    return {std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

inline RationalInterval min(const RationalInterval& a, const RationalInterval& b) {
    return {std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

inline RationalInterval hull(const RationalInterval& a, const RationalInterval& b) {
    return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

inline RationalInterval intersect(const RationalInterval& a, const RationalInterval& b) {
    if (!a.overlaps(b)) throw DomainError("disjoint intervals " + a.str() + " and " + b.str());
    return {std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

/// Interval widened by r on both sides.
inline RationalInterval inflate(const RationalInterval& a, const Rational& r) {
    return {a.lo() - r, a.hi() + r};
}

inline std::ostream& operator<<(std::ostream& os, const RationalInterval& x) { return os << x.str(); }

} // namespace arithdyn
