#pragma once

#include <vector>

#include "arithdyn/nslattice/lattice.hpp"

namespace arithdyn {

struct Inertia {
    int pos = 0, neg = 0, zero = 0;
    friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Inertia of a symmetric rational matrix by congruence diagonalization.
inline Inertia signature(const RatMatrix& g) {
    if (!g.square()) throw InvalidInput("signature of a non-square matrix");
    std::size_t n = g.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (g(i, j) != g(j, i)) throw InvalidInput("signature of a non-symmetric matrix");
    RatMatrix a = g;
    auto swap_both = [&](std::size_t i, std::size_t j) {
        for (std::size_t k = 0; k < n; ++k) std::swap(a(i, k), a(j, k));
        for (std::size_t k = 0; k < n; ++k) std::swap(a(k, i), a(k, j));
    };
    Inertia s;
    for (std::size_t k = 0; k < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t j = k + 1;
            while (j < n && a(j, j) == 0) ++j;
            if (j < n) {
                swap_both(k, j);
            } else {
                j = k + 1;
                while (j < n && a(k, j) == 0) ++j;
                if (j == n) {
                    ++s.zero;
                    continue;
                }
                // e_k -> e_k + e_j makes the pivot 2 a(k, j).
                for (std::size_t c = 0; c < n; ++c) a(k, c) += a(j, c);
                for (std::size_t r = 0; r < n; ++r) a(r, k) += a(r, j);
            }
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rational f = a(i, k) / a(k, k);
            for (std::size_t c = 0; c < n; ++c) a(i, c) -= f * a(k, c);
            for (std::size_t r = 0; r < n; ++r) a(r, i) -= f * a(r, k);
        }
        (sgn(a(k, k)) > 0 ? s.pos : s.neg)++;
    }
    return s;
}

/// q on N^1 of a hyper-Kaehler manifold of dimension 2m with Fujiki
/// constant c: D^(2m) = c q(D)^m.
class BeauvilleBogomolovForm {
public:
    BeauvilleBogomolovForm(RatMatrix gram, Rational c, unsigned m) : gram_(std::move(gram)), c_(std::move(c)), m_(m) {
        if (sgn(c_) <= 0) throw InvalidInput("Fujiki constant must be positive");
        if (m_ == 0) throw InvalidInput("half dimension must be at least 1");
        Inertia s = signature(gram_);
        if (s.pos != 1 || s.zero != 0 || s.neg != static_cast<int>(gram_.rows()) - 1)
            throw InvalidInput("Beauville-Bogomolov form must have signature (1, rho-1)");
    }

    const RatMatrix& gram() const { return gram_; }
    const Rational& fujiki_constant() const { return c_; }
    unsigned half_dim() const { return m_; }
    std::size_t rho() const { return gram_.rows(); }

    template <class T>
    T q(const Vec<T>& u, const Vec<T>& v) const {
        T s(0);
        for (std::size_t i = 0; i < gram_.rows(); ++i)
            for (std::size_t j = 0; j < gram_.cols(); ++j)
                if (sgn(gram_(i, j)) != 0) s = s + u[i] * v[j] * T(gram_(i, j));
        return s;
    }

    /// c / (2m-1)!! times the sum over perfect matchings of products of q.
    template <class T>
    T top_form(const std::vector<Vec<T>>& vs) const {
        if (vs.size() != 2 * m_) throw InvalidInput("top form needs 2m vectors");
        std::vector<std::vector<T>> pair_q(vs.size(), std::vector<T>(vs.size(), T(0)));
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j) pair_q[i][j] = q(vs[i], vs[j]);
        std::vector<bool> used(vs.size(), false);
        T sum = matchings(pair_q, used);
        return sum * T(c_ / double_factorial(2 * m_ - 1));
    }

    static Rational double_factorial(unsigned k) {
        Integer r = 1;
        for (unsigned i = k; i > 1; i -= 2) r *= i;
        return Rational(r);
    }

private:
    template <class T>
    static T matchings(const std::vector<std::vector<T>>& pq, std::vector<bool>& used) {
        std::size_t first = 0;
        while (first < used.size() && used[first]) ++first;
        if (first == used.size()) return T(1);
        used[first] = true;
        T total(0);
        for (std::size_t j = first + 1; j < used.size(); ++j) {
            if (used[j]) continue;
            used[j] = true;
            total = total + pq[first][j] * matchings(pq, used);
            used[j] = false;
        }
        used[first] = false;
        return total;
    }

    RatMatrix gram_;
    Rational c_;
    unsigned m_;
};

/// The 2m-linear form induced by the Fujiki relation, tabulated on basis
/// multisets.
inline TopIntersectionForm induced_top_form(const BeauvilleBogomolovForm& bb) {
    std::size_t rho = bb.rho();
    TopIntersectionForm t(rho, 2 * bb.half_dim());
    std::vector<Vec<Rational>> basis;
    for (std::size_t i = 0; i < rho; ++i) {
        Vec<Rational> e(rho, Rational(0));
        e[i] = 1;
        basis.push_back(e);
    }
    t.for_each_multiset([&](const TopIntersectionForm::Key& key) {
        std::vector<Vec<Rational>> vs;
        for (auto i : key) vs.push_back(basis[i]);
        Rational v = bb.top_form(vs);
        if (sgn(v) != 0) t.set(key, v);
    });
    return t;
}

/// M^T q M = q exactly.
inline bool isometry_check(const PullbackMap& f, const BeauvilleBogomolovForm& bb) {
    if (f.rank() != bb.rho()) throw InvalidInput("pullback rank does not match the form");
    RatMatrix m = to_rational(f.matrix());
    return m.transpose() * bb.gram() * m == bb.gram();
}

struct IsotropyBignessReport {
    bool q_plus_zero;    // exact zero of q(nu_+)
    bool q_minus_zero;   // exact zero of q(nu_-)
    RationalInterval q_plus, q_minus;
    Verdict big;         // q(nu_+ + nu_-) > 0
    RationalInterval q_sum;
    MiddleIndexReport middle;
};

inline IsotropyBignessReport isotropy_and_bigness_report(const BeauvilleBogomolovForm& bb, const EigenvectorPair& pair,
                                                         const Rational& precision = Rational(1, 100000000)) {
    const auto& p = pair.nu_plus.coords;
    const auto& n = pair.nu_minus.coords;
    FieldElement qp = bb.q(p, p), qm = bb.q(n, n);
    IsotropyBignessReport r{qp.is_zero(), qm.is_zero(), qp.enclose(precision), qm.enclose(precision),
                            Verdict::Unknown, RationalInterval(), {}};
    bool exact = detail::same_field(pair.nu_plus, pair.nu_minus);
    auto sr = detail::certified_sign(
        [&] {
            auto s = (pair.nu_plus + pair.nu_minus).coords;
            return bb.q(s, s);
        },
        [&](const Rational& w) {
            auto a = pair.nu_plus.enclose(w), b = pair.nu_minus.enclose(w);
            Vec<RationalInterval> s;
            for (std::size_t i = 0; i < a.size(); ++i) s.push_back(a[i] + b[i]);
            return bb.q(s, s);
        },
        exact, precision);
    r.big = sr.positive;
    r.q_sum = sr.enclosure;
    r.middle = middle_index_ell(induced_top_form(bb), pair, precision);
    return r;
}

} // namespace arithdyn
