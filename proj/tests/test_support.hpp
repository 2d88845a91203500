#pragma once

// Test-local oracles and generators. Nothing here calls the library's root
// isolation, Sturm sequences or eigenvector code.

#include <cmath>
#include <random>
#include <vector>

#include "arithdyn/nslattice.hpp"

namespace testsupport {

using namespace arithdyn;

inline IntPolynomial ip(std::initializer_list<long> c) {
    std::vector<Integer> v;
    for (long x : c) v.emplace_back(x);
    return IntPolynomial(std::move(v));
}

/// [floor(sqrt(n) 10^k), +1] / 10^k brackets sqrt(n).
inline std::pair<Rational, Rational> sqrt_bracket(long n, unsigned k) {
    Integer scale = ipow(Integer(10), k);
    Integer r;
    Integer big = Integer(n) * scale * scale;
    mpz_sqrt(r.get_mpz_t(), big.get_mpz_t());
    return {Rational(r) / Rational(scale), Rational(r + 1) / Rational(scale)};
}

/// a + b sqrt(D) with rational a, b; exact arithmetic in a real quadratic field.
struct Quad {
    Rational a, b;
    long D;
    Quad(Rational a_ = 0, Rational b_ = 0, long d = 5) : a(std::move(a_)), b(std::move(b_)), D(d) {}
    friend Quad operator+(const Quad& x, const Quad& y) { return {x.a + y.a, x.b + y.b, x.D}; }
    friend Quad operator-(const Quad& x, const Quad& y) { return {x.a - y.a, x.b - y.b, x.D}; }
    friend Quad operator*(const Quad& x, const Quad& y) { return {x.a * y.a + x.b * y.b * x.D, x.a * y.b + x.b * y.a, x.D}; }
    friend bool operator==(const Quad& x, const Quad& y) { return x.a == y.a && x.b == y.b; }
    /// Enclosure from a decimal bracket of sqrt(D).
    std::pair<Rational, Rational> bracket(unsigned k = 30) const {
        auto [lo, hi] = sqrt_bracket(D, k);
        Rational u = a + b * lo, v = a + b * hi;
        return u <= v ? std::pair{u, v} : std::pair{v, u};
    }
    double approx() const { return a.get_d() + b.get_d() * std::sqrt(static_cast<double>(D)); }
};

/// Determinant by cofactor expansion; independent of the library's Bareiss code.
inline Rational cofactor_det(const std::vector<std::vector<Rational>>& m) {
    std::size_t n = m.size();
    if (n == 1) return m[0][0];
    Rational s = 0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<Rational>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Rational> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(row);
        }
        Rational c = m[0][j] * cofactor_det(minor);
        s += (j % 2 ? -c : c);
    }
    return s;
}

/// det(t I - M) at a rational t.
inline Rational charpoly_at(const IntMatrix& m, const Rational& t) {
    std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = (i == j ? t : Rational(0)) - Rational(m(i, j));
    return cofactor_det(a);
}

/// Power iteration in doubles; the dominant direction normalized to max |coordinate| 1.
inline std::vector<double> power_iteration(const IntMatrix& m, int steps = 400) {
    std::size_t n = m.rows();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i);
    for (int s = 0; s < steps; ++s) {
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) w[i] += m(i, j).get_d() * v[j];
        double big = 0;
        for (double x : w) big = std::max(big, std::fabs(x));
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / big;
    }
    double big = 0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (std::fabs(v[i]) > big) big = std::fabs(v[i]), at = i;
    double s = v[at];
    for (auto& x : v) x /= s;
    return v;
}

/// Largest |eigenvalue| of a 2x2 integer matrix by the quadratic formula.
inline double radius_2x2(const IntMatrix& m) {
    double tr = Integer(m(0, 0) + m(1, 1)).get_d();
    double dt = Integer(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).get_d();
    double disc = tr * tr - 4 * dt;
    if (disc < 0) return std::sqrt(dt);
    return std::max(std::fabs((tr + std::sqrt(disc)) / 2), std::fabs((tr - std::sqrt(disc)) / 2));
}

inline IntMatrix random_matrix(std::mt19937& rng, std::size_t n, long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = d(rng);
    return m;
}

/// Product of random elementary matrices: unimodular by construction.
inline IntMatrix random_unimodular(std::mt19937& rng, std::size_t n, int steps = 6) {
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<long> k(-2, 2);
    for (int s = 0; s < steps; ++s) {
        std::size_t i = idx(rng), j = idx(rng);
        IntMatrix e = IntMatrix::identity(n);
        if (i == j) {
            e(i, i) = -1;
        } else {
            e(i, j) = k(rng);
        }
        u = u * e;
    }
    return u;
}

/// Wehler involution matrices and Gram matrix on (D1, D2, D3).
inline IntMatrix wehler_M(int i) {
    if (i == 1) return IntMatrix{{-1, 0, 0}, {2, 1, 0}, {2, 0, 1}};
    if (i == 2) return IntMatrix{{1, 2, 0}, {0, -1, 0}, {0, 2, 1}};
    return IntMatrix{{1, 0, 2}, {0, 1, 2}, {0, 0, -1}};
}
inline IntMatrix wehler_gram() { return IntMatrix{{0, 2, 2}, {2, 0, 2}, {2, 2, 0}}; }
inline IntMatrix wehler_composite() { return IntMatrix{{-1, -2, -6}, {2, 3, 10}, {2, 6, 15}}; }

/// 9 + 4 sqrt 5 bracket from decimal square roots.
inline std::pair<Rational, Rational> wehler_lambda_bracket(unsigned k = 30) { return Quad(9, 4).bracket(k); }

inline bool overlaps_bracket(const RationalInterval& iv, const std::pair<Rational, Rational>& br) {
    return iv.lo() <= br.second && br.first <= iv.hi();
}

} // namespace testsupport
