#pragma once

#include <string>
#include <vector>

#include "arithdyn/nslattice/matrix.hpp"

namespace arithdyn {

enum class ConeMembership { Inside, NearBoundary, Outside };

inline const char* to_string(ConeMembership m) {
    switch (m) {
    case ConeMembership::Inside: return "Inside";
    case ConeMembership::NearBoundary: return "NearBoundary";
    case ConeMembership::Outside: return "Outside";
    }
    return "?";
}

/// Finitely generated rational polyhedral cone, required to be pointed.
///
/// Membership is described by half-spaces n.v >= 0 (the facets, within the
/// linear span) together with equations e.v = 0 cutting out the span.
class RationalCone {
public:
    explicit RationalCone(std::vector<Vec<Rational>> generators) : gens_(std::move(generators)) {
        if (gens_.empty()) throw InvalidInput("cone needs at least one generator");
        dim_ = gens_[0].size();
        for (const auto& g : gens_) {
            if (g.size() != dim_) throw InvalidInput("cone generators of different lengths");
            if (std::all_of(g.begin(), g.end(), [](const Rational& x) { return sgn(x) == 0; }))
                throw InvalidInput("zero cone generator");
        }
        for (const auto& g : gens_) {
            Vec<Rational> neg(g);
            for (auto& x : neg) x = -x;
            if (contains_exact(neg)) throw InvalidInput("cone is not pointed");
        }
        build_halfspaces();
    }

    const std::vector<Vec<Rational>>& generators() const { return gens_; }
    std::size_t ambient_dim() const { return dim_; }
    const std::vector<Vec<Rational>>& facet_normals() const { return facets_; }
    const std::vector<Vec<Rational>>& span_equations() const { return equations_; }

    /// Exact membership of a rational vector (Caratheodory search).
    bool contains_exact(const Vec<Rational>& v) const {
        if (v.size() != dim_) throw InvalidInput("vector length does not match the cone");
        if (std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; })) return true;
        std::vector<std::size_t> pick;
        return search(v, 0, pick);
    }

    /// Exact membership for coordinates in Q(alpha) or Q.
    template <class T>
    bool contains(const Vec<T>& v) const {
        if (v.size() != dim_) throw InvalidInput("vector length does not match the cone");
        for (const auto& e : equations_)
            if (sgn(dot_mixed(e, v)) != 0) return false;
        for (const auto& n : facets_)
            if (sgn(dot_mixed(n, v)) < 0) return false;
        return true;
    }

    /// Classification of an enclosed vector.
    ConeMembership classify(const Vec<RationalInterval>& v) const {
        if (v.size() != dim_) throw InvalidInput("vector length does not match the cone");
        bool near = false;
        for (const auto& e : equations_) {
            RationalInterval s = dot_interval(e, v);
            if (!s.contains_zero()) return ConeMembership::Outside;
            if (!s.is_point()) near = true;
        }
        for (const auto& n : facets_) {
            RationalInterval s = dot_interval(n, v);
            if (s.hi() < 0) return ConeMembership::Outside;
            if (s.lo() < 0) near = true;
        }
        return near ? ConeMembership::NearBoundary : ConeMembership::Inside;
    }

    /// M maps every generator into the cone.
    bool preserved_by(const RatMatrix& m) const {
        for (const auto& g : gens_)
            if (!contains_exact(m.apply(g))) return false;
        return true;
    }

    /// Sum of the generators: a point of the relative interior.
    Vec<Rational> interior_point() const {
        Vec<Rational> s(dim_, Rational(0));
        for (const auto& g : gens_)
            for (std::size_t i = 0; i < dim_; ++i) s[i] += g[i];
        return s;
    }

private:
    bool search(const Vec<Rational>& v, std::size_t start, std::vector<std::size_t>& pick) const {
        if (!pick.empty() && solves_nonneg(v, pick)) return true;
        if (pick.size() == dim_) return false;
        for (std::size_t i = start; i < gens_.size(); ++i) {
            pick.push_back(i);
            if (independent(pick) && search(v, i + 1, pick)) return true;
            pick.pop_back();
        }
        return false;
    }

    RatMatrix columns(const std::vector<std::size_t>& pick) const {
        RatMatrix a(dim_, pick.size());
        for (std::size_t j = 0; j < pick.size(); ++j)
            for (std::size_t i = 0; i < dim_; ++i) a(i, j) = gens_[pick[j]][i];
        return a;
    }

    bool independent(const std::vector<std::size_t>& pick) const { return rank(columns(pick)) == pick.size(); }

    bool solves_nonneg(const Vec<Rational>& v, const std::vector<std::size_t>& pick) const {
        auto x = solve(columns(pick), v);
        if (!x) return false;
        return std::all_of(x->begin(), x->end(), [](const Rational& c) { return sgn(c) >= 0; });
    }

    void build_halfspaces() {
        std::vector<std::size_t> all(gens_.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        RatMatrix gt(gens_.size(), dim_);
        for (std::size_t i = 0; i < gens_.size(); ++i)
            for (std::size_t j = 0; j < dim_; ++j) gt(i, j) = gens_[i][j];
        // Equations: vectors orthogonal to every generator.
        equations_ = kernel(gt);
        std::size_t r = dim_ - equations_.size();
        // Candidate facet normals: orthogonal to the span equations' complement
        // and to r-1 independent generators.
        std::vector<std::size_t> pick;
        enumerate_facets(0, r, pick);
    }

    void enumerate_facets(std::size_t start, std::size_t r, std::vector<std::size_t>& pick) {
        if (r == 0) return;
        if (pick.size() + 1 == r) {
            // Normal n: orthogonal to the picked generators, lying in the span.
            RatMatrix a(pick.size() + equations_.size(), dim_);
            for (std::size_t k = 0; k < pick.size(); ++k)
                for (std::size_t j = 0; j < dim_; ++j) a(k, j) = gens_[pick[k]][j];
            for (std::size_t k = 0; k < equations_.size(); ++k)
                for (std::size_t j = 0; j < dim_; ++j) a(pick.size() + k, j) = equations_[k][j];
            auto ker = kernel(a);
            if (ker.size() != 1) return;
            Vec<Rational> n = primitive(ker[0]);
            int side = 0;
            for (const auto& g : gens_) {
                int s = sgn(dot(n, g));
                if (s == 0) continue;
                if (side == 0) side = s;
                if (s != side) return;
            }
            if (side == 0) return;
            if (side < 0)
                for (auto& x : n) x = -x;
            if (std::find(facets_.begin(), facets_.end(), n) == facets_.end()) facets_.push_back(n);
            return;
        }
        for (std::size_t i = start; i < gens_.size(); ++i) {
            pick.push_back(i);
            RatMatrix a(pick.size(), dim_);
            for (std::size_t k = 0; k < pick.size(); ++k)
                for (std::size_t j = 0; j < dim_; ++j) a(k, j) = gens_[pick[k]][j];
            if (rank(a) == pick.size()) enumerate_facets(i + 1, r, pick);
            pick.pop_back();
        }
    }

    static Vec<Rational> primitive(Vec<Rational> v) {
        Integer l = 1, g = 0;
        for (const auto& x : v) l = lcm(l, x.get_den());
        for (auto& x : v) x *= l;
        for (const auto& x : v) g = gcd(g, x.get_num());
        if (g != 0)
            for (auto& x : v) x /= g;
        return v;
    }

    template <class T>
    static T dot_mixed(const Vec<Rational>& a, const Vec<T>& v) {
        T s(0);
        for (std::size_t i = 0; i < a.size(); ++i)
            if (sgn(a[i]) != 0) s += T(a[i]) * v[i];
        return s;
    }

    static RationalInterval dot_interval(const Vec<Rational>& a, const Vec<RationalInterval>& v) {
        RationalInterval s(Rational(0));
        for (std::size_t i = 0; i < a.size(); ++i) s = s + v[i] * a[i];
        return s;
    }

    std::vector<Vec<Rational>> gens_;
    std::size_t dim_ = 0;
    std::vector<Vec<Rational>> facets_;
    std::vector<Vec<Rational>> equations_;
};

} // namespace arithdyn
