#pragma once

#include <functional>
#include <map>
#include <vector>

#include "arithdyn/nslattice/matrix.hpp"

namespace arithdyn {

/// Symmetric d-linear form on a rank-rho lattice, stored by its values on
/// sorted multisets of basis indices. Missing multisets are zero.
class TopIntersectionForm {
public:
    using Key = std::vector<std::size_t>;

    TopIntersectionForm(std::size_t rho, std::size_t d) : rho_(rho), d_(d) {
        if (d == 0) throw InvalidInput("intersection form needs dim_X >= 1");
        if (rho == 0) throw InvalidInput("intersection form needs a nonempty basis");
    }

    /// Form of a surface from its Gram matrix.
    static TopIntersectionForm from_gram(const RatMatrix& g) {
        if (!g.square()) throw InvalidInput("Gram matrix must be square");
        TopIntersectionForm f(g.rows(), 2);
        for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j) {
                if (g(i, j) != g(j, i)) throw InvalidInput("Gram matrix is not symmetric");
                if (i <= j) f.set({i, j}, g(i, j));
            }
        return f;
    }

    std::size_t rho() const { return rho_; }
    std::size_t dim() const { return d_; }
    const std::map<Key, Rational>& values() const { return values_; }

    /// Sets the value on a multiset (any order); symmetry is by construction.
    void set(Key idx, const Rational& v) {
        check_key(idx);
        std::sort(idx.begin(), idx.end());
        if (sgn(v) == 0)
            values_.erase(idx);
        else
            values_[idx] = v;
    }

    Rational at(Key idx) const {
        check_key(idx);
        std::sort(idx.begin(), idx.end());
        auto it = values_.find(idx);
        return it == values_.end() ? Rational(0) : it->second;
    }

    /// T(v_1, ..., v_d) for coordinates in any ring that accepts rationals.
    template <class T>
    T evaluate(const std::vector<Vec<T>>& vs) const {
        if (vs.size() != d_) throw InvalidInput("intersection form arity mismatch");
        for (const auto& v : vs)
            if (v.size() != rho_) throw InvalidInput("vector length does not match the lattice rank");
        // Sum over stored multisets of the value times the permanent-like
        // sum over distinct orderings of the multiset.
        T total(0);
        for (const auto& [key, val] : values_) {
            Key perm = key;
            T s(0);
            do {
                T term(1);
                for (std::size_t k = 0; k < d_; ++k) term = term * vs[k][perm[k]];
                s = s + term;
            } while (std::next_permutation(perm.begin(), perm.end()));
            total = total + s * T(val);
        }
        return total;
    }

    /// T(v, ..., v).
    template <class T>
    T power(const Vec<T>& v) const {
        return evaluate(std::vector<Vec<T>>(d_, v));
    }

    /// Form multiplicativity on all basis tuples: T(Me_1..Me_d) = e T(e_1..e_d).
    bool multiplicative_under(const RatMatrix& m, const Rational& e) const {
        if (m.rows() != rho_ || !m.square()) throw InvalidInput("matrix does not match the lattice rank");
        std::vector<Vec<Rational>> images;
        for (std::size_t j = 0; j < rho_; ++j) images.push_back(m.col(j));
        bool ok = true;
        for_each_multiset([&](const Key& key) {
            if (!ok) return;
            std::vector<Vec<Rational>> vs;
            for (auto i : key) vs.push_back(images[i]);
            if (evaluate(vs) != e * at(key)) ok = false;
        });
        return ok;
    }

    /// Visits every sorted multiset of size d from {0..rho-1}.
    void for_each_multiset(const std::function<void(const Key&)>& f) const {
        Key k(d_, 0);
        for (;;) {
            f(k);
            std::size_t i = d_;
            while (i > 0 && k[i - 1] == rho_ - 1) --i;
            if (i == 0) return;
            ++k[i - 1];
            for (std::size_t j = i; j < d_; ++j) k[j] = k[i - 1];
        }
    }

    friend bool operator==(const TopIntersectionForm& a, const TopIntersectionForm& b) {
        return a.rho_ == b.rho_ && a.d_ == b.d_ && a.values_ == b.values_;
    }

private:
    void check_key(const Key& idx) const {
        if (idx.size() != d_) throw InvalidInput("multiset size does not match dim_X");
        for (auto i : idx)
            if (i >= rho_) throw InvalidInput("basis index out of range");
    }

    std::size_t rho_, d_;
    std::map<Key, Rational> values_;
};

} // namespace arithdyn
