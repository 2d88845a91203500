#pragma once

#include <functional>
#include <optional>
#include <tuple>
#include <string>
#include <vector>

#include "arithdyn/nslattice/cone.hpp"
#include "arithdyn/nslattice/form.hpp"
#include "arithdyn/nslattice/matrix.hpp"

namespace arithdyn {

/// Action of f^* on a basis of N^1 (columns are images of basis classes).
class PullbackMap {
public:
    PullbackMap(IntMatrix m, Integer degree = 1, bool automorphism = false)
        : m_(std::move(m)), degree_(std::move(degree)), aut_(automorphism) {
        if (!m_.square() || m_.rows() == 0) throw InvalidInput("pullback matrix must be square and nonempty");
        if (sgn(degree_) <= 0) throw InvalidInput("mapping degree must be positive");
        if (aut_) {
            Integer d = det(m_);
            if (d != 1 && d != -1) throw InvalidInput("automorphism pullback must have determinant +-1");
            if (degree_ != 1) throw InvalidInput("automorphism must have mapping degree 1");
        }
    }

    const IntMatrix& matrix() const { return m_; }
    const Integer& degree() const { return degree_; }
    bool is_automorphism() const { return aut_; }
    std::size_t rank() const { return m_.rows(); }

    /// Pullback by the inverse automorphism: the integer inverse matrix.
    PullbackMap inverse() const {
        if (!aut_) throw PreconditionError("inverse pullback requires an automorphism");
        auto inv = arithdyn::inverse(to_rational(m_));
        return PullbackMap(to_integer(*inv), 1, true);
    }

private:
    IntMatrix m_;
    Integer degree_;
    bool aut_;
};

/// A class in N^1 with exact coordinates in Q or Q(lambda).
struct DivisorClass {
    Vec<FieldElement> coords;

    std::size_t basis_dim() const { return coords.size(); }
    bool is_zero() const {
        return std::all_of(coords.begin(), coords.end(), [](const FieldElement& x) { return x.is_zero(); });
    }
    Vec<RationalInterval> enclose(const Rational& eps) const {
        Vec<RationalInterval> out;
        for (const auto& c : coords) out.push_back(c.enclose(eps));
        return out;
    }
    std::vector<double> approx() const {
        std::vector<double> out;
        for (const auto& c : coords) out.push_back(c.to_double());
        return out;
    }
    static DivisorClass from_rational(const Vec<Rational>& v) {
        DivisorClass d;
        for (const auto& x : v) d.coords.emplace_back(x);
        return d;
    }
};

inline DivisorClass operator+(const DivisorClass& a, const DivisorClass& b) {
    if (a.coords.size() != b.coords.size()) throw InvalidInput("class length mismatch");
    DivisorClass s;
    for (std::size_t i = 0; i < a.coords.size(); ++i) s.coords.push_back(a.coords[i] + b.coords[i]);
    return s;
}

struct EigenvectorPair {
    DivisorClass nu_plus;
    DivisorClass nu_minus;
    RealAlgebraicNumber lambda_plus;
    RealAlgebraicNumber lambda_minus;
};

namespace detail {

inline std::optional<RealAlgebraicNumber> largest_real_root(const IntPolynomial& p) {
    auto roots = isolate_real_roots(p);
    if (roots.empty()) return std::nullopt;
    return roots.back();
}

} // namespace detail

/// Spectral radius of an integer matrix as an exact real algebraic number.
///
/// The largest |real eigenvalue| comes from the characteristic polynomial at
/// t and -t. The eigenvalues of the symmetric square are the products z_i z_j,
/// which include |z|^2 for every eigenvalue z, so the largest real root R of
/// its characteristic polynomial is exactly rho^2. When rho^2 > R is not
/// attained by a real eigenvalue, rho = sqrt(R).
inline RealAlgebraicNumber spectral_radius(const IntMatrix& m) {
    IntPolynomial chi = charpoly(m);
    std::optional<RealAlgebraicNumber> real_max;
    for (const auto& cand : {detail::largest_real_root(chi), detail::largest_real_root(chi.reflect())}) {
        if (!cand || sign(*cand) < 0) continue;
        if (!real_max || compare(*cand, *real_max) == Ordering::Greater) real_max = *cand;
    }
    auto r2 = detail::largest_real_root(charpoly(symmetric_square(m)));
    if (!r2) throw InvariantViolation("symmetric square has no real eigenvalue");
    if (sign(*r2) == 0) return RealAlgebraicNumber::from_rational(Rational(0));
    if (real_max) {
        RealAlgebraicNumber sq = *real_max;
        // Compare real_max^2 with R through R's square root.
        RealAlgebraicNumber root = kth_root(*r2, 2);
        if (compare(sq, root) == Ordering::Equal) return sq;
        return root;
    }
    return kth_root(*r2, 2);
}

inline RealAlgebraicNumber spectral_radius(const PullbackMap& f) { return spectral_radius(f.matrix()); }

/// Everything known about the dominant eigenvalue.
struct SpectralData {
    RealAlgebraicNumber radius;
    IntPolynomial charpoly;
    bool attained_by_positive_eigenvalue;
};

inline SpectralData spectral_data(const PullbackMap& f) {
    IntPolynomial chi = charpoly(f.matrix());
    RealAlgebraicNumber r = spectral_radius(f);
    bool attained = sign(r) > 0 && sign_at(chi, r) == 0;
    return {r, chi, attained};
}

namespace detail {

inline Matrix<FieldElement> shifted(const IntMatrix& m, const FieldElement& lam) {
    std::size_t n = m.rows();
    Matrix<FieldElement> a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = FieldElement(Rational(m(i, j)));
            if (i == j) a(i, j) -= lam;
        }
    return a;
}

/// Positive rescaling so the largest absolute coordinate becomes exactly 1.
inline Vec<FieldElement> normalize_max(Vec<FieldElement> v) {
    std::size_t best = v.size();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        if (best == v.size()) {
            best = i;
            continue;
        }
        // |v_i| > |v_best|  iff  (v_i - v_best)(v_i + v_best) > 0
        if (((v[i] - v[best]) * (v[i] + v[best])).sign() > 0) best = i;
    }
    if (best == v.size()) throw InvariantViolation("normalizing the zero vector");
    FieldElement s = v[best].inverse();
    if (s.sign() < 0) s = -s;
    for (auto& x : v) x = x * s;
    return v;
}

/// Divide chi by (t - lam) as often as it vanishes at lam, over Q(lam).
inline std::vector<FieldElement> cofactor_poly(const IntPolynomial& chi, const FieldElement& lam) {
    std::vector<FieldElement> c;
    for (const auto& a : chi.coeffs()) c.emplace_back(Rational(a));
    for (;;) {
        // Synthetic division by (t - lam).
        std::size_t n = c.size();
        if (n < 2) break;
        std::vector<FieldElement> q(n - 1);
        FieldElement acc = c[n - 1];
        q[n - 2] = acc;
        for (std::size_t i = n - 1; i-- > 1;) {
            acc = c[i] + acc * lam;
            q[i - 1] = acc;
        }
        FieldElement rem = c[0] + acc * lam;
        if (!rem.is_zero()) break;
        c = std::move(q);
    }
    return c;
}

} // namespace detail

/// An eigenvector of M for the eigenvalue lam (a real root of chi(M)) that
/// lies in K. A one-dimensional eigenspace fixes the direction up to sign.
/// Otherwise the spectral projection r(M) s of an interior point s of K onto
/// the generalized eigenspace is used, where chi = (t - lam)^a r.
inline Vec<FieldElement> eigenvector_in_cone(const IntMatrix& m, const RealAlgebraicNumber& lam, const RationalCone& k) {
    auto field = std::make_shared<NumberField>(lam);
    FieldElement l = lam.is_rational() ? FieldElement(*lam.as_rational()) : FieldElement::generator(field);
    auto basis = kernel(detail::shifted(m, l));
    if (basis.empty()) throw InvariantViolation("eigenvalue has an empty eigenspace");
    if (basis.size() == 1) {
        Vec<FieldElement> v = basis[0];
        if (k.contains(v)) return detail::normalize_max(v);
        for (auto& x : v) x = -x;
        if (k.contains(v)) return detail::normalize_max(v);
        throw PreconditionError("eigenvector does not lie in the supplied cone");
    }
    auto r = detail::cofactor_poly(charpoly(m), l);
    Vec<FieldElement> s;
    for (const auto& x : k.interior_point()) s.emplace_back(x);
    // Horner: r(M) s.
    Vec<FieldElement> acc(s.size(), FieldElement(0));
    for (std::size_t i = r.size(); i-- > 0;) {
        acc = m.apply(acc);
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += r[i] * s[j];
    }
    auto residual = detail::shifted(m, l).apply(acc);
    bool eigen = std::all_of(residual.begin(), residual.end(), [](const FieldElement& x) { return x.is_zero(); });
    bool nonzero = std::any_of(acc.begin(), acc.end(), [](const FieldElement& x) { return !x.is_zero(); });
    if (!eigen || !nonzero) throw PreconditionError("no eigenvector found in the supplied cone");
    if (!k.contains(acc)) {
        for (auto& x : acc) x = -x;
        if (!k.contains(acc)) throw PreconditionError("eigenvector does not lie in the supplied cone");
    }
    return detail::normalize_max(acc);
}

/// Infinity-norm residual enclosure of M v - lam v with coordinates enclosed
/// to width eps.
inline RationalInterval eigen_residual(const IntMatrix& m, const RealAlgebraicNumber& lam, const DivisorClass& v,
                                       const Rational& eps) {
    auto iv = v.enclose(eps);
    RationalInterval l = refine(lam, eps);
    Rational worst = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        RationalInterval s(Rational(0));
        for (std::size_t j = 0; j < m.cols(); ++j) s = s + iv[j] * Rational(m(i, j));
        s = s - l * iv[i];
        worst = std::max(worst, s.magnitude());
    }
    return {Rational(0), worst};
}

/// Leading eigenvector of an M-invariant cone, normalized so its largest
/// coordinate is 1.
inline DivisorClass leading_eigenvector_in_cone(const PullbackMap& f, const RationalCone& k, const Rational& eps) {
    if (sgn(eps) <= 0) throw InvalidInput("eps must be positive");
    if (k.ambient_dim() != f.rank()) throw InvalidInput("cone dimension does not match the lattice rank");
    RealAlgebraicNumber lam = spectral_radius(f);
    if (compare(lam, Rational(1)) != Ordering::Greater)
        throw PreconditionError("spectral radius must exceed 1");
    if (!k.preserved_by(to_rational(f.matrix()))) throw PreconditionError("cone is not preserved by the pullback");
    DivisorClass v{eigenvector_in_cone(f.matrix(), lam, k)};
    RationalInterval res = eigen_residual(f.matrix(), lam, v, eps / (4 * Rational(f.rank()) * 64));
    if (res.hi() > eps) throw InvariantViolation("eigenvector residual exceeds tolerance");
    return v;
}

/// (nu_+, nu_-) for an automorphism: leading eigenvectors of f^* and of the
/// inverse pullback, each placed in K by choice of sign. K need not be
/// invariant; it only fixes the orientation.
inline EigenvectorPair eigenvector_pair(const PullbackMap& f, const RationalCone& k, const Rational& eps) {
    if (!f.is_automorphism()) throw PreconditionError("eigenvector pair requires an automorphism");
    if (sgn(eps) <= 0) throw InvalidInput("eps must be positive");
    if (k.ambient_dim() != f.rank()) throw InvalidInput("cone dimension does not match the lattice rank");
    PullbackMap g = f.inverse();
    RealAlgebraicNumber lp = spectral_radius(f);
    RealAlgebraicNumber lm = spectral_radius(g);
    if (compare(lp, Rational(1)) != Ordering::Greater || compare(lm, Rational(1)) != Ordering::Greater)
        throw PreconditionError("spectral radius must exceed 1");
    if (compare(lp, lm) == Ordering::Equal) lm = lp;  // share one number field
    DivisorClass vp{eigenvector_in_cone(f.matrix(), lp, k)};
    DivisorClass vm{eigenvector_in_cone(g.matrix(), lm, k)};
    for (const auto& [mat, lam, v] : {std::tuple{f.matrix(), lp, vp}, std::tuple{g.matrix(), lm, vm}})
        if (eigen_residual(mat, lam, v, eps / 256).hi() > eps) throw InvariantViolation("eigenvector residual exceeds tolerance");
    return {vp, vm, lp, lm};
}

struct ConditionAReport {
    bool holds;
    RealAlgebraicNumber lambda_f;
    RealAlgebraicNumber lambda_f_inv;
    bool lambda_exceeds_one;
    bool radii_equal;
};

inline ConditionAReport condition_A(const PullbackMap& f) {
    if (!f.is_automorphism()) throw PreconditionError("Condition A is defined for automorphisms");
    RealAlgebraicNumber a = spectral_radius(f);
    RealAlgebraicNumber b = spectral_radius(f.inverse());
    bool gt = compare(a, Rational(1)) == Ordering::Greater;
    bool eq = compare(a, b) == Ordering::Equal;
    return {gt && eq, a, b, gt, eq};
}

enum class Verdict { True, False, Unknown };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Unknown: return "unknown";
    }
    return "?";
}

namespace detail {

inline bool same_field(const DivisorClass& a, const DivisorClass& b) {
    FieldPtr fa, fb;
    for (const auto& c : a.coords)
        if (c.field()) fa = c.field();
    for (const auto& c : b.coords)
        if (c.field()) fb = c.field();
    if (!fa || !fb) return true;
    return compare(fa->alpha, fb->alpha) == Ordering::Equal;
}

/// Sign of a form value: exact when all coordinates live in one field,
/// otherwise by interval refinement down to width min_width.
struct SignResult {
    Verdict positive;
    int sign;          // valid when certified
    bool certified;
    RationalInterval enclosure;
};

template <class F>
SignResult certified_sign(F&& exact, const std::function<RationalInterval(const Rational&)>& enclose, bool exact_ok,
                          const Rational& min_width) {
    if (exact_ok) {
        FieldElement v = exact();
        int s = v.sign();
        return {s > 0 ? Verdict::True : Verdict::False, s, true, v.enclose(min_width)};
    }
    Rational w(1, 1024);
    for (;;) {
        RationalInterval iv = enclose(w);
        if (iv.positive()) return {Verdict::True, 1, true, iv};
        if (iv.negative()) return {Verdict::False, -1, true, iv};
        if (w < min_width) return {Verdict::Unknown, 0, false, iv};
        w /= 1024;
    }
}

} // namespace detail

struct ConditionBReport {
    Verdict verdict;
    RationalInterval volume;  // enclosure of T(nu, ..., nu), nu = nu_+ + nu_-
    bool exact;
    bool in_cone;
};

/// Condition B: the top self-intersection of nu_+ + nu_- is positive.
inline ConditionBReport condition_B(const TopIntersectionForm& form, const EigenvectorPair& pair, const RationalCone& k,
                                    const Rational& precision = Rational(1, 100000000)) {
    bool in_cone = k.contains(pair.nu_plus.coords) && k.contains(pair.nu_minus.coords);
    if (!in_cone) throw PreconditionError("eigenvector pair does not lie in the cone");
    bool exact = detail::same_field(pair.nu_plus, pair.nu_minus);
    auto sr = detail::certified_sign(
        [&] { return form.power((pair.nu_plus + pair.nu_minus).coords); },
        [&](const Rational& w) {
            auto a = pair.nu_plus.enclose(w), b = pair.nu_minus.enclose(w);
            Vec<RationalInterval> s;
            for (std::size_t i = 0; i < a.size(); ++i) s.push_back(a[i] + b[i]);
            return form.power(s);
        },
        exact, precision);
    return {sr.positive, sr.enclosure, exact, in_cone};
}

struct MiddleIndexReport {
    int ell;
    bool identity_holds;
    bool identity_certified;
    std::vector<RationalInterval> mixed;  // nu_+^j nu_-^(d-j), j = 0..d
    std::vector<int> mixed_sign;          // 0 means refinable to zero
    bool exact;
};

/// The unique 0 < l < d with nu_+^l nu_-^(d-l) != 0 and the identity
/// lambda_+^l = lambda_-^(d-l).
inline MiddleIndexReport middle_index_ell(const TopIntersectionForm& form, const EigenvectorPair& pair,
                                          const Rational& precision = Rational(1, 100000000)) {
    std::size_t d = form.dim();
    bool exact = detail::same_field(pair.nu_plus, pair.nu_minus);
    MiddleIndexReport rep{-1, false, false, {}, {}, exact};
    std::vector<int> nonzero;
    for (std::size_t j = 0; j <= d; ++j) {
        auto vectors_exact = [&] {
            std::vector<Vec<FieldElement>> vs;
            for (std::size_t i = 0; i < d; ++i) vs.push_back(i < j ? pair.nu_plus.coords : pair.nu_minus.coords);
            return form.evaluate(vs);
        };
        auto vectors_iv = [&](const Rational& w) {
            auto a = pair.nu_plus.enclose(w), b = pair.nu_minus.enclose(w);
            std::vector<Vec<RationalInterval>> vs;
            for (std::size_t i = 0; i < d; ++i) vs.push_back(i < j ? a : b);
            return form.evaluate(vs);
        };
        auto sr = detail::certified_sign(vectors_exact, vectors_iv, exact, precision);
        int s = sr.certified ? sr.sign : 0;
        rep.mixed.push_back(sr.enclosure);
        rep.mixed_sign.push_back(s);
        if (s != 0 && j > 0 && j < d) nonzero.push_back(static_cast<int>(j));
    }
    if (nonzero.size() > 1) throw InvariantViolation("more than one nonvanishing mixed product");
    if (nonzero.empty()) return rep;
    rep.ell = nonzero[0];
    unsigned l = static_cast<unsigned>(rep.ell), r = static_cast<unsigned>(d) - l;
    // lambda_+^l against lambda_-^(d-l): exact when the radii coincide.
    if (compare(pair.lambda_plus, pair.lambda_minus) == Ordering::Equal) {
        rep.identity_holds = (l == r) || compare(pair.lambda_plus, Rational(1)) == Ordering::Equal;
        rep.identity_certified = true;
        return rep;
    }
    RealExpr a = pow(RealExpr::leaf(pair.lambda_plus), l), b = pow(RealExpr::leaf(pair.lambda_minus), r);
    RealExpr diff = a - b;
    for (unsigned level = 8;; level += 8) {
        RationalInterval iv = diff.enclose(level);
        if (iv.excludes_zero()) {
            rep.identity_holds = false;
            rep.identity_certified = true;
            return rep;
        }
        if (iv.width() < precision) {
            rep.identity_holds = true;
            rep.identity_certified = false;
            return rep;
        }
    }
}

inline PullbackMap block_product(const PullbackMap& g, const PullbackMap& h) {
    return PullbackMap(block_diag(g.matrix(), h.matrix()), g.degree() * h.degree(),
                       g.is_automorphism() && h.is_automorphism());
}

inline PullbackMap hilbert_extension(const PullbackMap& f) {
    if (!f.is_automorphism()) throw PreconditionError("Hilbert-scheme extension requires an automorphism");
    return PullbackMap(block_diag(f.matrix(), IntMatrix::identity(1)), 1, true);
}

/// Spectral radius is unchanged under a unimodular change of basis.
inline bool basis_change_invariance(const PullbackMap& f, const IntMatrix& u) {
    if (!u.square() || u.rows() != f.rank()) throw InvalidInput("basis change has the wrong shape");
    Integer d = det(u);
    if (d != 1 && d != -1) throw PreconditionError("basis change must be unimodular");
    IntMatrix uinv = to_integer(*inverse(to_rational(u)));
    IntMatrix conj = uinv * f.matrix() * u;
    return compare(spectral_radius(conj), spectral_radius(f)) == Ordering::Equal;
}

} // namespace arithdyn
