#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arithdyn/exactreal.hpp"

namespace arithdyn {

inline bool is_zero_value(const Integer& x) { return sgn(x) == 0; }
inline bool is_zero_value(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero_value(const FieldElement& x) { return x.is_zero(); }

template <class T>
using Vec = std::vector<T>;

/// Dense row-major matrix with value semantics.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, T(0)) {}
    Matrix(std::initializer_list<std::initializer_list<T>> rows) {
        r_ = rows.size();
        c_ = r_ ? rows.begin()->size() : 0;
        for (const auto& row : rows) {
            if (row.size() != c_) throw InvalidInput("ragged matrix literal");
            a_.insert(a_.end(), row.begin(), row.end());
        }
    }
    static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
        Matrix m;
        m.r_ = rows.size();
        m.c_ = m.r_ ? rows[0].size() : 0;
        for (const auto& row : rows) {
            if (row.size() != m.c_) throw InvalidInput("ragged matrix");
            m.a_.insert(m.a_.end(), row.begin(), row.end());
        }
        return m;
    }
    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    bool square() const { return r_ == c_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    Vec<T> row(std::size_t i) const { return Vec<T>(a_.begin() + static_cast<long>(i * c_), a_.begin() + static_cast<long>((i + 1) * c_)); }
    Vec<T> col(std::size_t j) const {
        Vec<T> v;
        v.reserve(r_);
        for (std::size_t i = 0; i < r_; ++i) v.push_back((*this)(i, j));
        return v;
    }

    Matrix transpose() const {
        Matrix t(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.c_ != b.r_) throw InvalidInput("matrix product shape mismatch");
        Matrix p(a.r_, b.c_);
        for (std::size_t i = 0; i < a.r_; ++i)
            for (std::size_t k = 0; k < a.c_; ++k) {
                const T& x = a(i, k);
                if (is_zero_value(x)) continue;
                for (std::size_t j = 0; j < b.c_; ++j) p(i, j) += x * b(k, j);
            }
        return p;
    }
    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        if (a.r_ != b.r_ || a.c_ != b.c_) throw InvalidInput("matrix sum shape mismatch");
        Matrix s = a;
        for (std::size_t i = 0; i < s.a_.size(); ++i) s.a_[i] += b.a_[i];
        return s;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.r_ != b.r_ || a.c_ != b.c_) throw InvalidInput("matrix difference shape mismatch");
        Matrix s = a;
        for (std::size_t i = 0; i < s.a_.size(); ++i) s.a_[i] -= b.a_[i];
        return s;
    }
    friend Matrix operator*(const T& s, const Matrix& a) {
        Matrix m = a;
        for (auto& x : m.a_) x = s * x;
        return m;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) { return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_; }

    template <class U>
    Vec<U> apply(const Vec<U>& v) const {
        if (v.size() != c_) throw InvalidInput("matrix-vector shape mismatch");
        Vec<U> out(r_, U(0));
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j)
                if (!is_zero_value((*this)(i, j))) out[i] += U((*this)(i, j)) * v[j];
        return out;
    }

    template <class U, class F>
    Matrix<U> map(F f) const {
        Matrix<U> m(r_, c_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) m(i, j) = f((*this)(i, j));
        return m;
    }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<T> a_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

inline RatMatrix to_rational(const IntMatrix& m) {
    return m.map<Rational>([](const Integer& x) { return Rational(x); });
}

/// Exact conversion; throws if an entry is not integral.
inline IntMatrix to_integer(const RatMatrix& m) {
    return m.map<Integer>([](const Rational& x) {
        if (x.get_den() != 1) throw InvariantViolation("matrix entry is not an integer");
        return Integer(x.get_num());
    });
}

/// Determinant by fraction-free Bareiss elimination.
inline Integer det(const IntMatrix& m) {
    if (!m.square()) throw InvalidInput("determinant of a non-square matrix");
    std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                a(i, j) = v;
            }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

/// Reduced row echelon form over a field; returns the pivot columns.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& a) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && is_zero_value(a(p, c))) ++p;
        if (p == a.rows()) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(p, j));
        T inv = T(1) / a(r, c);
        for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) = a(r, j) * inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || is_zero_value(a(i, c))) continue;
            T f = a(i, c);
            for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

template <class T>
std::size_t rank(Matrix<T> a) {
    return rref(a).size();
}

/// Basis of the right kernel {x : A x = 0}.
template <class T>
std::vector<Vec<T>> kernel(Matrix<T> a) {
    auto piv = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : piv) is_pivot[p] = true;
    std::vector<Vec<T>> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vec<T> v(a.cols(), T(0));
        v[f] = T(1);
        for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -a(k, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Solve A x = b; nullopt if inconsistent. Free variables are set to zero.
template <class T>
std::optional<Vec<T>> solve(const Matrix<T>& a, const Vec<T>& b) {
    Matrix<T> aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
    Vec<T> x(a.cols(), T(0));
    for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = aug(k, a.cols());
    return x;
}

inline std::optional<RatMatrix> inverse(const RatMatrix& m) {
    if (!m.square()) throw InvalidInput("inverse of a non-square matrix");
    std::size_t n = m.rows();
    RatMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    RatMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

/// Characteristic polynomial det(tI - M) by reduction to Hessenberg form.
inline IntPolynomial charpoly(const RatMatrix& m) {
    if (!m.square()) throw InvalidInput("characteristic polynomial of a non-square matrix");
    std::size_t n = m.rows();
    RatMatrix h = m;
    for (std::size_t k = 1; k + 1 <= n; ++k) {
        std::size_t i = k;
        while (i < n && h(i, k - 1) == 0) ++i;
        if (i == n) continue;
        if (i != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(h(i, j), h(k, j));
            for (std::size_t j = 0; j < n; ++j) std::swap(h(j, i), h(j, k));
        }
        Rational t = h(k, k - 1);
        for (std::size_t r = k + 1; r < n; ++r) {
            Rational u = h(r, k - 1) / t;
            if (u == 0) continue;
            for (std::size_t j = 0; j < n; ++j) h(r, j) -= u * h(k, j);
            for (std::size_t j = 0; j < n; ++j) h(j, k) += u * h(j, r);
        }
    }
    // p_k is the characteristic polynomial of the leading k x k block.
    std::vector<RatPolynomial> p{RatPolynomial{Rational(1)}};
    const RatPolynomial t_var = RatPolynomial::variable();
    for (std::size_t k = 1; k <= n; ++k) {
        RatPolynomial pk = (t_var - RatPolynomial::constant(h(k - 1, k - 1))) * p[k - 1];
        Rational prod = 1;
        for (std::size_t i = k - 1; i-- > 0;) {
            prod *= h(i + 1, i);
            if (prod == 0) break;
            pk -= (h(i, k - 1) * prod) * p[i];
        }
        p.push_back(pk);
    }
    std::vector<Integer> c;
    for (const auto& a : p[n].coeffs()) {
        if (a.get_den() != 1) throw InvariantViolation("characteristic polynomial is not integral");
        c.emplace_back(a.get_num());
    }
    return IntPolynomial(std::move(c));
}

inline IntPolynomial charpoly(const IntMatrix& m) { return charpoly(to_rational(m)); }

template <class T>
Matrix<T> block_diag(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> m(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
    return m;
}

/// Action of M on the symmetric square, basis e_i e_j with i <= j. Its
/// eigenvalues are the products z_i z_j of eigenvalues of M, i <= j.
inline IntMatrix symmetric_square(const IntMatrix& m) {
    std::size_t n = m.rows();
    std::vector<std::pair<std::size_t, std::size_t>> basis;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) basis.emplace_back(i, j);
    std::size_t d = basis.size();
    IntMatrix s(d, d);
    for (std::size_t col = 0; col < d; ++col) {
        auto [i, j] = basis[col];
        for (std::size_t row = 0; row < d; ++row) {
            auto [k, l] = basis[row];
            Integer v = m(k, i) * m(l, j);
            if (k != l) v += m(l, i) * m(k, j);
            s(row, col) = v;
        }
    }
    return s;
}

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
    if (a.size() != b.size()) throw InvalidInput("dot product length mismatch");
    T s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <class T>
std::string to_string(const Matrix<T>& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + to_string(m(i, j));
        s += "]";
    }
    return s + "]";
}

} // namespace arithdyn
