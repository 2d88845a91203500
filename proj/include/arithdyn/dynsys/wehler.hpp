#pragma once

#include <array>
#include <map>
#include <memory>
#include <vector>

#include "arithdyn/dynsys/factorize.hpp"
#include "arithdyn/heights.hpp"
#include "arithdyn/nslattice.hpp"

namespace arithdyn {

/// Conjugate root of A z^2 + B zw + C w^2 through [u:v]: product formula
/// [Cv : Au], then sum formula [-Bv - Au : Av], then [Cu : -Bu - Cv].
inline MultiProjPoint::Tuple vieta_other_root(const Integer& a, const Integer& b, const Integer& c,
                                              const MultiProjPoint::Tuple& current) {
    if (current.size() != 2) throw InvalidInput("fiber coordinate must lie in P^1");
    if (sgn(a) == 0 && sgn(b) == 0 && sgn(c) == 0) throw DegenerateFiber("fiber quadratic vanishes identically");
    const Integer& u = current[0];
    const Integer& v = current[1];
    if (sgn(u) == 0 && sgn(v) == 0) throw InvalidInput("zero projective tuple");
    if (sgn(Integer(a * u * u + b * u * v + c * v * v)) != 0) throw PreconditionError("point is not a root of the fiber quadratic");
    std::array<MultiProjPoint::Tuple, 3> candidates{
        MultiProjPoint::Tuple{Integer(c * v), Integer(a * u)},
        MultiProjPoint::Tuple{Integer(-b * v - a * u), Integer(a * v)},
        MultiProjPoint::Tuple{Integer(c * u), Integer(-b * u - c * v)},
    };
    for (auto& t : candidates) {
        if (sgn(t[0]) == 0 && sgn(t[1]) == 0) continue;
        MultiProjPoint::normalize(t);
        return t;
    }
    throw DegenerateFiber("all Vieta formulas degenerate");
}

/// A (2,2,2)-form on (P^1)^3. Coefficient c[a][b][e] multiplies the
/// monomials of index a, b, e in the three factors; index k in a factor
/// [u:v] is u^(2-k) v^k.
class WehlerForm {
public:
    using Cube = std::array<std::array<std::array<Integer, 3>, 3>, 3>;

    explicit WehlerForm(Cube c) : c_(std::move(c)) {
        bool any = false;
        for (const auto& p : c_)
            for (const auto& q : p)
                for (const auto& x : q) any = any || sgn(x) != 0;
        if (!any) throw InvalidInput("Wehler form is identically zero");
    }

    const Cube& coeffs() const { return c_; }

    template <class T>
    static std::array<T, 3> monomials(const T& u, const T& v) {
        return {u * u, u * v, v * v};
    }

    template <class T>
    T evaluate(const std::array<std::pair<T, T>, 3>& p) const {
        auto mx = monomials(p[0].first, p[0].second);
        auto my = monomials(p[1].first, p[1].second);
        auto mz = monomials(p[2].first, p[2].second);
        T s(0);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int e = 0; e < 3; ++e)
                    if (sgn(c_[a][b][e]) != 0) s = s + T(c_[a][b][e]) * mx[a] * my[b] * mz[e];
        return s;
    }

    /// Coefficients (A, B, C) of the quadratic in factor i at a point.
    template <class T>
    std::array<T, 3> fiber(std::size_t i, const std::array<std::pair<T, T>, 3>& p) const {
        std::array<std::array<T, 3>, 3> m{monomials(p[0].first, p[0].second), monomials(p[1].first, p[1].second),
                                          monomials(p[2].first, p[2].second)};
        std::array<T, 3> out{T(0), T(0), T(0)};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int e = 0; e < 3; ++e) {
                    if (sgn(c_[a][b][e]) == 0) continue;
                    int idx[3] = {a, b, e};
                    T term(c_[a][b][e]);
                    for (std::size_t j = 0; j < 3; ++j)
                        if (j != i) term = term * m[j][idx[j]];
                    out[idx[i]] = out[idx[i]] + term;
                }
        return out;
    }

    /// The forms A, B, C of involution i as 3x3 coefficient arrays over the
    /// remaining two factors (ascending order).
    std::array<std::array<std::array<Integer, 3>, 3>, 3> fiber_forms(std::size_t i) const {
        std::array<std::array<std::array<Integer, 3>, 3>, 3> out{};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int e = 0; e < 3; ++e) {
                    int idx[3] = {a, b, e};
                    int rest[2], r = 0;
                    for (std::size_t j = 0; j < 3; ++j)
                        if (j != i) rest[r++] = idx[j];
                    out[idx[i]][rest[0]][rest[1]] += c_[a][b][e];
                }
        return out;
    }

    static std::array<std::pair<Integer, Integer>, 3> coords(const MultiProjPoint& p) {
        if (p.size() != 3) throw InvalidInput("Wehler points live in (P^1)^3");
        std::array<std::pair<Integer, Integer>, 3> out;
        for (std::size_t i = 0; i < 3; ++i) {
            if (p.factor(i).size() != 2) throw InvalidInput("Wehler points live in (P^1)^3");
            out[i] = {p.factor(i)[0], p.factor(i)[1]};
        }
        return out;
    }

    Integer evaluate(const MultiProjPoint& p) const { return evaluate(coords(p)); }

    /// sigma_i: swap the i-th coordinate with the other root of its fiber.
    MultiProjPoint involution(std::size_t i, const MultiProjPoint& p) const {
        if (i > 2) throw InvalidInput("involution index must be 1, 2 or 3");
        auto f = fiber(i, coords(p));
        auto fs = p.factors();
        fs[i] = vieta_other_root(f[0], f[1], f[2], p.factor(i));
        return MultiProjPoint(std::move(fs));
    }

    /// An integer R such that gcd(A, B, C) at every primitive point divides R
    /// (resultants of the fiber forms); zero if the elimination degenerates.
    Integer fiber_resultant(std::size_t i) const;

private:
    Cube c_;
};

namespace detail {

/// A(s, t) with t dehomogenized: coefficient of t^b is a polynomial in s of
/// formal degree 2.
inline std::array<IntPolynomial, 3> t_coefficients(const std::array<std::array<Integer, 3>, 3>& g) {
    std::array<IntPolynomial, 3> out;
    for (int b = 0; b < 3; ++b) {
        std::vector<Integer> cs;
        for (int a = 0; a < 3; ++a) cs.push_back(g[a][b]);
        out[b] = IntPolynomial(cs);
    }
    return out;
}

/// Resultant in t of two binary quadratics whose coefficients are
/// polynomials in s; formal degree 8 in s.
inline IntPolynomial quadratic_resultant(const std::array<IntPolynomial, 3>& f, const std::array<IntPolynomial, 3>& g) {
    IntPolynomial x = f[2] * g[0] - f[0] * g[2];
    IntPolynomial y = f[2] * g[1] - f[1] * g[2];
    IntPolynomial z = f[1] * g[0] - f[0] * g[1];
    return x * x - y * z;
}

/// Homogeneous Sylvester resultant with formal degrees.
inline Integer formal_resultant(const IntPolynomial& f, std::size_t df, const IntPolynomial& g, std::size_t dg) {
    std::size_t n = df + dg;
    IntMatrix s(n, n);
    for (std::size_t r = 0; r < dg; ++r)
        for (std::size_t k = 0; k <= df; ++k) s(r, r + k) = f.coeff(df - k);
    for (std::size_t r = 0; r < df; ++r)
        for (std::size_t k = 0; k <= dg; ++k) s(dg + r, r + k) = g.coeff(dg - k);
    return det(s);
}

} // namespace detail

inline Integer WehlerForm::fiber_resultant(std::size_t i) const {
    auto forms = fiber_forms(i);
    std::array<std::array<IntPolynomial, 3>, 3> tc;
    for (std::size_t k = 0; k < 3; ++k) tc[k] = detail::t_coefficients(forms[k]);
    auto combo = [&](int x, int y) {
        std::array<IntPolynomial, 3> out;
        for (int b = 0; b < 3; ++b) out[b] = tc[0][b] * IntPolynomial::constant(Integer(x)) + tc[1][b] * IntPolynomial::constant(Integer(y));
        return out;
    };
    std::vector<IntPolynomial> rs{detail::quadratic_resultant(tc[0], tc[1]), detail::quadratic_resultant(tc[0], tc[2]),
                                  detail::quadratic_resultant(tc[1], tc[2])};
    // Extra combinations guard against shared factors between the pairwise
    // eliminants.
    for (int k = 1; k <= 3; ++k) rs.push_back(detail::quadratic_resultant(combo(1, k), tc[2]));
    Integer g = 0;
    for (std::size_t a = 0; a < rs.size(); ++a)
        for (std::size_t b = a + 1; b < rs.size(); ++b) {
            Integer r = detail::formal_resultant(rs[a], 8, rs[b], 8);
            if (sgn(r) != 0) g = gcd(g, r);
        }
    return g;
}

/// Archimedean data of one factor: the primitive integer pair is
/// exp(scale) * (u, v), with max(|u|, |v|) close to 1.
struct ArchFactor {
    RationalInterval u, v, scale;
};

/// p-adic data of one factor: the primitive pair modulo p^prec.
struct PadicFactor {
    Integer u, v;
    unsigned prec = 0;
};

/// A point of a Wehler surface known through its local data: rigorous
/// archimedean enclosures plus exact residues at the primes where gcd(A,B,C)
/// can be nontrivial. Everywhere else the primitive image is given exactly
/// by dividing the Vieta numerators by V^2 gcd(A,B,C) (or U^2 gcd(A,B,C)).
struct LocalPoint {
    std::array<ArchFactor, 3> arch;
    std::vector<std::array<PadicFactor, 3>> padic;  // one entry per model prime
};

/// The data needed to iterate local points of one Wehler surface.
class WehlerLocalModel {
public:
    using PrimeExponents = std::vector<std::pair<Integer, unsigned>>;

    /// Primes that can divide gcd(A, B, C) for some involution, with the
    /// largest exponent allowed by the fiber resultants.
    static PrimeExponents model_primes(const WehlerForm& form) {
        std::map<Integer, unsigned> primes;
        for (std::size_t i = 0; i < 3; ++i) {
            Integer r = form.fiber_resultant(i);
            if (sgn(r) == 0) throw PreconditionError("fiber forms have a common zero; local heights unavailable");
            for (const auto& [p, e] : factor_integer(r)) primes[p] = std::max(primes[p], e);
        }
        return {primes.begin(), primes.end()};
    }

    /// bits: absolute working precision of the archimedean enclosures.
    WehlerLocalModel(WehlerForm form, const PrimeExponents& primes, unsigned bits = 256, unsigned padic_bits = 512)
        : form_(std::move(form)), bits_(bits) {
        for (const auto& [p, e] : primes) {
            primes_.push_back(p);
            unsigned digits = static_cast<unsigned>(padic_bits / std::max<std::size_t>(1, bit_size(p) - 1)) + 1;
            digits_.push_back(std::max(digits, 2 * e + 8));
            min_digits_.push_back(e + 1);
            logp_.push_back(log_enclosure(p, bits));
        }
    }

    WehlerLocalModel(const WehlerForm& form, unsigned bits = 256) : WehlerLocalModel(form, model_primes(form), bits) {}

    const WehlerForm& form() const { return form_; }
    const std::vector<Integer>& primes() const { return primes_; }
    unsigned bits() const { return bits_; }

    LocalPoint from_point(const MultiProjPoint& p) const {
        auto c = WehlerForm::coords(p);
        LocalPoint lp;
        for (std::size_t i = 0; i < 3; ++i) {
            const Integer& u = c[i].first;
            const Integer& v = c[i].second;
            Integer big = abs(u) > abs(v) ? u : v;
            lp.arch[i] = {RationalInterval(Rational(u, big)).rounded_out(bits_),
                          RationalInterval(Rational(v, big)).rounded_out(bits_), log_enclosure(abs(big), bits_)};
        }
        for (std::size_t j = 0; j < primes_.size(); ++j) {
            Integer mod = ipow(primes_[j], digits_[j]);
            std::array<PadicFactor, 3> row;
            for (std::size_t i = 0; i < 3; ++i)
                row[i] = {modp(c[i].first, mod), modp(c[i].second, mod), digits_[j]};
            lp.padic.push_back(row);
        }
        return lp;
    }

    /// Enclosures of log H_i.
    std::vector<RationalInterval> log_houses(const LocalPoint& p) const {
        std::vector<RationalInterval> out;
        for (const auto& f : p.arch) {
            Rational lo = std::max(abs(f.u).lo(), abs(f.v).lo());
            Rational hi = std::max(abs(f.u).hi(), abs(f.v).hi());
            out.push_back(f.scale + log_enclosure(RationalInterval(lo, hi), bits_));
        }
        return out;
    }

    LocalPoint involution(std::size_t i, const LocalPoint& p) const {
        if (i > 2) throw InvalidInput("involution index must be 1, 2 or 3");
        LocalPoint out = p;
        RationalInterval log_gamma(Rational(0));
        for (std::size_t j = 0; j < primes_.size(); ++j) {
            unsigned m = 0;
            out.padic[j][i] = padic_step(j, i, p.padic[j], m);
            if (m) log_gamma = log_gamma + logp_[j] * Rational(m);
        }
        out.arch[i] = arch_step(i, p.arch, log_gamma);
        return out;
    }

private:
    static Integer modp(const Integer& x, const Integer& mod) {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
        return r;
    }

    /// Valuation of a residue modulo p^k, capped at k.
    static unsigned val(const Integer& x, const Integer& p, unsigned k) {
        if (sgn(x) == 0) return k;
        Integer t = x;
        return static_cast<unsigned>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t()));
    }

    PadicFactor padic_step(std::size_t j, std::size_t i, const std::array<PadicFactor, 3>& row, unsigned& m) const {
        const Integer& p = primes_[j];
        unsigned k = std::min({row[0].prec, row[1].prec, row[2].prec});
        Integer mod = ipow(p, k);
        std::array<std::pair<Integer, Integer>, 3> c;
        for (std::size_t t = 0; t < 3; ++t) c[t] = {modp(row[t].u, mod), modp(row[t].v, mod)};
        auto abc = form_.fiber(i, c);
        for (auto& x : abc) x = modp(x, mod);
        m = std::min({val(abc[0], p, k), val(abc[1], p, k), val(abc[2], p, k)});
        if (m >= k) throw ResourceLimit("p-adic precision exhausted at p = " + p.get_str());
        const Integer& u = c[i].first;
        const Integer& v = c[i].second;
        Integer n0, n1;
        if (val(v, p, k) == 0) {
            n0 = -abc[1] * v - abc[0] * u;
            n1 = abc[0] * v;
        } else {
            n0 = abc[2] * u;
            n1 = -abc[1] * u - abc[2] * v;
        }
        n0 = modp(n0, mod);
        n1 = modp(n1, mod);
        unsigned w = std::min(val(n0, p, k), val(n1, p, k));
        if (w + min_digits_[j] >= k) throw ResourceLimit("p-adic precision exhausted at p = " + p.get_str());
        Integer pw = ipow(p, w), nmod = ipow(p, k - w);
        return {modp(Integer(n0 / pw), nmod), modp(Integer(n1 / pw), nmod), k - w};
    }

    ArchFactor arch_step(std::size_t i, const std::array<ArchFactor, 3>& a, const RationalInterval& log_gamma) const {
        std::array<std::pair<RationalInterval, RationalInterval>, 3> c;
        for (std::size_t t = 0; t < 3; ++t) c[t] = {a[t].u, a[t].v};
        auto abc = form_.fiber(i, c);
        for (auto& x : abc) x = x.rounded_out(bits_);
        if (abc[0].contains_zero() && abc[1].contains_zero() && abc[2].contains_zero())
            throw ResourceLimit("archimedean precision cannot separate the fiber from degeneracy");
        const RationalInterval& u = a[i].u;
        const RationalInterval& v = a[i].v;
        RationalInterval nu, nv;
        if (abs(v.mid()) >= abs(u.mid())) {
            if (v.contains_zero()) throw ResourceLimit("archimedean precision exhausted");
            nu = (Rational(-1) * (abc[1] * v + abc[0] * u)) / (v * v);
            nv = abc[0] / v;
        } else {
            if (u.contains_zero()) throw ResourceLimit("archimedean precision exhausted");
            nu = abc[2] / u;
            nv = (Rational(-1) * (abc[1] * u + abc[2] * v)) / (u * u);
        }
        RationalInterval scale(Rational(0));
        for (std::size_t t = 0; t < 3; ++t)
            if (t != i) scale = scale + a[t].scale * Rational(2);
        scale = scale - a[i].scale - log_gamma;
        // Rescale so the dominant coordinate is exactly 1 (signs are projective).
        bool u_big = abs(nu.mid()) >= abs(nv.mid());
        const RationalInterval& big = u_big ? nu : nv;
        if (big.contains_zero()) throw ResourceLimit("archimedean precision exhausted");
        scale = scale + log_enclosure(abs(big), bits_);
        RationalInterval one(Rational(1));
        RationalInterval other = ((u_big ? nv : nu) / big).rounded_out(bits_);
        return u_big ? ArchFactor{one, other, scale.rounded_out(bits_)} : ArchFactor{other, one, scale.rounded_out(bits_)};
    }

    WehlerForm form_;
    unsigned bits_;
    std::vector<Integer> primes_;
    std::vector<unsigned> digits_, min_digits_;
    std::vector<RationalInterval> logp_;
};

} // namespace arithdyn
