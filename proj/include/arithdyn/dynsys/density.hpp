#pragma once

#include <set>
#include <string>
#include <vector>

#include "arithdyn/dynsys/systems.hpp"

namespace arithdyn {

/// NotDense is always certified. NoRelationFound means the screening found
/// no invariant subvariety of the kind it looks for; it is not a proof.
enum class DensityVerdict { NotDense, NoRelationFound, Inconclusive };

inline const char* to_string(DensityVerdict v) {
    switch (v) {
    case DensityVerdict::NotDense: return "not_dense";
    case DensityVerdict::NoRelationFound: return "no_relation_found";
    default: return "inconclusive";
    }
}

struct DensityReport {
    DensityVerdict verdict = DensityVerdict::Inconclusive;
    bool certified = false;
    std::string evidence;
};

namespace detail {

inline std::size_t rank_mod(std::vector<std::vector<Integer>> rows, const Integer& p) {
    std::size_t r = 0, cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && sgn(rows[piv][c]) == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        Integer inv;
        mpz_invert(inv.get_mpz_t(), rows[r][c].get_mpz_t(), p.get_mpz_t());
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (sgn(rows[i][c]) == 0) continue;
            Integer f = rows[i][c] * inv % p;
            for (std::size_t j = c; j < cols; ++j) {
                rows[i][j] = (rows[i][j] - f * rows[r][j]) % p;
                if (sgn(rows[i][j]) < 0) rows[i][j] += p;
            }
        }
        ++r;
    }
    return r;
}

/// Exact orbit points while they stay small; reports the first repeat.
inline std::optional<std::pair<std::size_t, std::size_t>> small_repeat(const System& s, const MultiProjPoint& p,
                                                                       std::size_t steps, std::size_t max_bits) {
    std::map<MultiProjPoint, std::size_t> seen;
    MultiProjPoint q = p;
    for (std::size_t n = 0; n <= steps; ++n) {
        auto [it, fresh] = seen.emplace(q, n);
        if (!fresh) return std::make_pair(it->second, n);
        if (n == steps) break;
        q = apply(s, q);
        if (q.max_bits() > max_bits) break;
    }
    return std::nullopt;
}

/// One Wehler step over F_p; false when a fiber quadratic vanishes mod p.
inline bool wehler_step_mod(const WehlerSystem& w, std::array<std::pair<Integer, Integer>, 3>& x, const Integer& p) {
    for (int s : w.word) {
        std::size_t i = static_cast<std::size_t>(s - 1);
        auto f = w.form.fiber(i, x);
        for (auto& c : f) c = ((c % p) + p) % p;
        if (sgn(f[0]) == 0 && sgn(f[1]) == 0 && sgn(f[2]) == 0) return false;
        const Integer &u = x[i].first, &v = x[i].second;
        std::array<std::pair<Integer, Integer>, 3> cand{
            std::pair<Integer, Integer>{f[2] * v, f[0] * u},
            {-f[1] * v - f[0] * u, f[0] * v},
            {f[2] * u, -f[1] * u - f[2] * v},
        };
        bool done = false;
        for (auto& [a, b] : cand) {
            a = ((a % p) + p) % p;
            b = ((b % p) + p) % p;
            if (sgn(a) == 0 && sgn(b) == 0) continue;
            x[i] = {a, b};
            done = true;
            break;
        }
        if (!done) return false;
    }
    return true;
}

inline DensityReport wehler_density(const WehlerSystem& w, const MultiProjPoint& p, unsigned degree) {
    if (auto rep = small_repeat(System(w), p, 24, 4096))
        return {DensityVerdict::NotDense, true,
                "finite orbit: f^" + std::to_string(rep->second) + "(P) = f^" + std::to_string(rep->first) + "(P)"};
    // Multidegree (k,k,k) forms vanish on the orbit; multiples of the surface
    // equation account for a space of dimension (k-1)^3.
    std::size_t k = degree, monos = (k + 1) * (k + 1) * (k + 1);
    std::size_t expected = k >= 2 ? monos - (k - 1) * (k - 1) * (k - 1) : monos;
    std::size_t samples = 2 * monos + 8;
    Integer p0 = Integer(1) << 61;
    for (int attempt = 0; attempt < 6; ++attempt) {
        mpz_nextprime(p0.get_mpz_t(), p0.get_mpz_t());
        auto x = WehlerForm::coords(p);
        for (auto& [a, b] : x) {
            a = ((a % p0) + p0) % p0;
            b = ((b % p0) + p0) % p0;
        }
        bool ok = true;
        std::vector<std::vector<Integer>> rows;
        for (std::size_t n = 0; n < samples && ok; ++n) {
            std::array<std::vector<Integer>, 3> pw;
            for (std::size_t j = 0; j < 3; ++j)
                for (std::size_t e = 0; e <= k; ++e) {
                    Integer t = 1;
                    for (std::size_t r = 0; r < k - e; ++r) t = t * x[j].first % p0;
                    for (std::size_t r = 0; r < e; ++r) t = t * x[j].second % p0;
                    pw[j].push_back(t);
                }
            std::vector<Integer> row;
            for (auto& a : pw[0])
                for (auto& b : pw[1])
                    for (auto& c : pw[2]) row.push_back(Integer(a * b % p0 * c % p0));
            rows.push_back(std::move(row));
            if (n + 1 < samples) ok = wehler_step_mod(w, x, p0);
        }
        if (!ok) continue;
        std::size_t r = rank_mod(rows, p0);
        std::string tail = " among " + std::to_string(samples) + " orbit points mod " + p0.get_str();
        if (r >= expected)
            return {DensityVerdict::NoRelationFound, false,
                    "no invariant form of multidegree (" + std::to_string(k) + "," + std::to_string(k) + "," + std::to_string(k) +
                        ") beyond the surface equation" + tail};
        return {DensityVerdict::Inconclusive, false,
                "rank " + std::to_string(r) + " < " + std::to_string(expected) + tail + "; the orbit may lie on a curve"};
    }
    return {DensityVerdict::Inconclusive, false, "no prime of good reduction for the orbit was found"};
}

/// Rank of the log |x_i| over Q, via exponent vectors over a coprime base.
inline std::size_t multiplicative_rank(const std::vector<std::pair<Integer, Integer>>& ratios) {
    std::vector<Integer> all;
    for (const auto& [a, b] : ratios) {
        all.push_back(a);
        all.push_back(b);
    }
    auto base = coprime_base(all);
    if (base.empty()) return 0;
    RatMatrix m(ratios.size(), base.size());
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        auto ea = exponents_over(ratios[i].first, base), eb = exponents_over(ratios[i].second, base);
        for (std::size_t k = 0; k < base.size(); ++k) m(i, k) = Rational(ea[k] - eb[k]);
    }
    return rank(m);
}

/// Largest k <= bound with t^k - 1 sharing a factor with chi.
inline unsigned root_of_unity_order(const IntPolynomial& chi, unsigned bound) {
    for (unsigned k = 1; k <= bound; ++k) {
        std::vector<Integer> c(k + 1, Integer(0));
        c[0] = -1;
        c[k] = 1;
        if (gcd(chi, IntPolynomial(c)).degree() > 0) return k;
    }
    return 0;
}

} // namespace detail

/// Screens the orbit of P for invariant proper subvarieties. Finite orbits
/// and invariant subtori certify non-density; otherwise the verdict is a
/// labelled heuristic.
inline DensityReport density_heuristic(const System& s, const MultiProjPoint& p, unsigned degree = 2) {
    detail::require_shape(s, p);
    if (degree < 1 || degree > 4) throw InvalidInput("density screening degree must be between 1 and 4");
    return std::visit(
        [&](const auto& x) -> DensityReport {
            using S = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<S, WehlerSystem>) {
                if (!x.on_surface(p)) throw DomainError("point is not on the Wehler surface");
                return detail::wehler_density(x, p, degree);
            } else if constexpr (std::is_same_v<S, PowerSystem>) {
                const auto& t = p.factor(0);
                for (std::size_t i = 0; i < t.size(); ++i)
                    if (sgn(t[i]) == 0)
                        return {DensityVerdict::NotDense, true, "coordinate " + std::to_string(i) + " vanishes on an invariant hyperplane"};
                std::vector<std::pair<Integer, Integer>> r;
                for (std::size_t i = 1; i < t.size(); ++i) r.emplace_back(t[i], t[0]);
                std::size_t rk = detail::multiplicative_rank(r);
                if (rk < r.size())
                    return {DensityVerdict::NotDense, true,
                            "coordinate ratios are multiplicatively dependent (rank " + std::to_string(rk) +
                                "); the relation is preserved by x -> x^d"};
                return {DensityVerdict::NoRelationFound, false, "coordinate ratios are multiplicatively independent"};
            } else if constexpr (std::is_same_v<S, MonomialSystem>) {
                std::vector<std::pair<Integer, Integer>> r;
                for (const auto& t : p.factors()) {
                    if (sgn(t[0]) == 0 || sgn(t[1]) == 0) throw DomainError("monomial maps act on torus points only");
                    r.emplace_back(t[0], t[1]);
                }
                if (auto rep = detail::small_repeat(s, p, 24, 4096))
                    return {DensityVerdict::NotDense, true,
                            "finite orbit: f^" + std::to_string(rep->second) + "(P) = f^" + std::to_string(rep->first) + "(P)"};
                std::size_t rk = detail::multiplicative_rank(r);
                unsigned k = detail::root_of_unity_order(charpoly(x.exponents), 60);
                if (rk < r.size())
                    return {DensityVerdict::Inconclusive, false,
                            "coordinates are multiplicatively dependent (rank " + std::to_string(rk) + ")"};
                if (k > 0)
                    return {DensityVerdict::Inconclusive, false,
                            "the exponent matrix has a root of unity of order " + std::to_string(k) + " as eigenvalue"};
                return {DensityVerdict::NoRelationFound, false,
                        "coordinates are multiplicatively independent and no eigenvalue is a root of unity"};
            } else {
                std::size_t k = factor_count(*x.left);
                std::vector<std::size_t> li, ri;
                for (std::size_t i = 0; i < p.size(); ++i) (i < k ? li : ri).push_back(i);
                auto a = density_heuristic(*x.left, p.project(li), degree);
                auto b = density_heuristic(*x.right, p.project(ri), degree);
                if (a.verdict == DensityVerdict::NotDense)
                    return {DensityVerdict::NotDense, true, "the base orbit is not dense: " + a.evidence};
                if (b.verdict == DensityVerdict::NotDense)
                    return {DensityVerdict::NotDense, true, "the fiber factor orbit is not dense: " + b.evidence};
                return {DensityVerdict::Inconclusive, false,
                        "both factor screens passed, but product orbits can lie on graphs of correspondences"};
            }
        },
        s.variant());
}

} // namespace arithdyn
