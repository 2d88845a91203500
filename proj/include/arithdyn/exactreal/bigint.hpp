#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "arithdyn/error.hpp"

namespace arithdyn {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw DomainError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline int sgn(const Integer& x) { return ::sgn(x); }
inline int sgn(const Rational& x) { return ::sgn(x); }

inline Integer ipow(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rational rpow(const Rational& base, unsigned long e) {
    Rational r(ipow(base.get_num(), e), ipow(base.get_den(), e));
    r.canonicalize();
    return r;
}

inline Rational pow2(long e) {
    if (e >= 0) return Rational(ipow(Integer(2), static_cast<unsigned long>(e)));
    return Rational(Integer(1), ipow(Integer(2), static_cast<unsigned long>(-e)));
}

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Integer floor(const Rational& x) { return floor_div(x.get_num(), x.get_den()); }
inline Integer ceil(const Rational& x) { return ceil_div(x.get_num(), x.get_den()); }

/// Largest multiple of 2^-bits that is <= x.
inline Rational dyadic_floor(const Rational& x, unsigned bits) {
    Integer scale = ipow(Integer(2), bits);
    return make_rational(floor_div(x.get_num() * scale, x.get_den()), scale);
}

/// Smallest multiple of 2^-bits that is >= x.
inline Rational dyadic_ceil(const Rational& x, unsigned bits) {
    Integer scale = ipow(Integer(2), bits);
    return make_rational(ceil_div(x.get_num() * scale, x.get_den()), scale);
}

inline std::size_t bit_size(const Integer& x) {
    return x == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline std::string to_string(const Integer& x) { return x.get_str(); }

inline std::string to_string(const Rational& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline double to_double(const Rational& x) { return x.get_d(); }

inline Integer parse_integer(std::string_view s) {
    Integer r;
    std::string str(s);
    if (str.empty() || r.set_str(str, 10) != 0) throw InvalidInput("not an integer: '" + str + "'");
    return r;
}

/// Parses "p", "p/q", or a decimal such as "-1.25" or "1e-12" into an exact rational.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw InvalidInput("empty rational");
    if (auto slash = s.find('/'); slash != std::string::npos) {
        return make_rational(parse_integer(s.substr(0, slash)), parse_integer(s.substr(slash + 1)));
    }
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        try {
            exp10 = std::stol(s.substr(e + 1));
        } catch (const std::exception&) {
            throw InvalidInput("bad exponent in '" + s + "'");
        }
        s = s.substr(0, e);
    }
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string::npos) {
        digits = s.substr(0, dot) + s.substr(dot + 1);
        exp10 -= static_cast<long>(s.size() - dot - 1);
    } else {
        digits = s;
    }
    if (digits.empty()) throw InvalidInput("bad rational '" + std::string(text) + "'");
    Integer mant = parse_integer(digits);
    if (neg) mant = -mant;
    if (exp10 >= 0) return Rational(mant * ipow(Integer(10), static_cast<unsigned long>(exp10)));
    return make_rational(mant, ipow(Integer(10), static_cast<unsigned long>(-exp10)));
}

/// Exact value of a finite double.
inline Rational from_double(double x) {
    Rational r;
    mpq_set_d(r.get_mpq_t(), x);
    return r;
}

} // namespace arithdyn
