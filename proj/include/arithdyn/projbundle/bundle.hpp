#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "arithdyn/projbundle/chow.hpp"

namespace arithdyn {

/// Numerical Harder-Narasimhan type: graded pieces (rank, degree) with
/// strictly decreasing slopes.
class HNType {
public:
    struct Piece {
        Integer rank;
        Integer degree;
        Rational slope() const { return make_rational(degree, rank); }
    };

    explicit HNType(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
        if (pieces_.empty()) throw InvalidInput("HN type needs at least one graded piece");
        for (const auto& p : pieces_)
            if (sgn(p.rank) <= 0) throw InvalidInput("graded pieces need positive rank");
        for (std::size_t i = 1; i < pieces_.size(); ++i)
            if (!(pieces_[i].slope() < pieces_[i - 1].slope())) throw InvalidInput("HN slopes must strictly decrease");
    }

    const std::vector<Piece>& pieces() const { return pieces_; }
    Integer rank() const {
        Integer r = 0;
        for (const auto& p : pieces_) r += p.rank;
        return r;
    }
    Integer degree() const {
        Integer d = 0;
        for (const auto& p : pieces_) d += p.degree;
        return d;
    }
    ChowRing ring() const {
        Integer r = rank();
        if (!r.fits_uint_p()) throw ResourceLimit("bundle rank too large");
        return ChowRing(static_cast<unsigned>(r.get_ui()), degree());
    }

private:
    std::vector<Piece> pieces_;
};

struct SlopeStats {
    Rational mu_min, mu_max, mu;
    bool semistable;
};

/// For a non-semistable type mu_max > mu > mu_min strictly; a failure is an
/// InvariantViolation.
inline SlopeStats slope_stats(const HNType& hn) {
    SlopeStats s{hn.pieces().back().slope(), hn.pieces().front().slope(), make_rational(hn.degree(), hn.rank()),
                 hn.pieces().size() == 1};
    if (s.semistable) {
        if (s.mu_min != s.mu || s.mu_max != s.mu) throw InvariantViolation("semistable type with distinct slopes");
    } else if (!(s.mu_max > s.mu && s.mu > s.mu_min)) {
        throw InvariantViolation("slope inequalities mu_max > mu > mu_min fail");
    }
    return s;
}

/// Generators F and D - mu_min F of the nef cone.
inline std::pair<ChowElement, ChowElement> nef_generators(const HNType& hn) {
    ChowRing r = hn.ring();
    Rational mu = slope_stats(hn).mu_min;
    ChowElement f = ChowElement::F(r);
    return {f, ChowElement::D(r) - FieldElement(mu) * f};
}

/// An endomorphism of P(E) over g : C -> C with delta = deg f / deg g.
struct BundleEndoData {
    unsigned n;
    Integer deg_g;
    Rational delta;
    Rational mu_min;

    BundleEndoData(unsigned rank, Integer dg, Rational dl, Rational mu)
        : n(rank), deg_g(std::move(dg)), delta(std::move(dl)), mu_min(std::move(mu)) {
        if (n < 2) throw InvalidInput("projective bundles need rank at least 2");
        if (sgn(deg_g) <= 0) throw InvalidInput("deg g must be positive");
        if (sgn(delta) <= 0) throw InvalidInput("delta must be positive");
    }

    /// d = delta^{1/(n-1)}, rational exactly when delta is a perfect power.
    RealAlgebraicNumber d() const { return kth_root(delta, n - 1); }

    /// d as a field element: rational, or the generator of Q(d).
    FieldElement d_element() const {
        RealAlgebraicNumber x = d();
        if (auto q = x.as_rational()) return FieldElement(*q);
        return FieldElement::generator(std::make_shared<const NumberField>(x));
    }

    Rational deg_f() const { return delta * Rational(deg_g); }
};

/// f^* on the basis (F, D): f^*F = deg g F, f^*D = (deg g - d) mu_min F + d D.
struct PullbackAction {
    FieldElement a11, a12, a22;  // [[a11, a12], [0, a22]] acting on column (F, D)
    FieldElement d;
    std::vector<RealAlgebraicNumber> eigenvalues;  // {deg g, d}
    RealAlgebraicNumber lambda1;

    ChowElement image_F(const ChowRing& r) const { return a11 * ChowElement::F(r); }
    ChowElement image_D(const ChowRing& r) const { return a12 * ChowElement::F(r) + a22 * ChowElement::D(r); }

    /// The ring map determined by the images of F and D.
    ChowElement apply(const ChowElement& x) const {
        const ChowRing& r = x.ring();
        ChowElement fd = image_D(r), ff = image_F(r);
        ChowElement out(r), pw = ChowElement::constant(r, 1);
        for (unsigned i = 0; i < r.n; ++i) {
            out = out + x.p()[i] * pw + x.q()[i] * (pw * ff);
            pw = pw * fd;
        }
        return out;
    }
};

inline PullbackAction pullback_action(const BundleEndoData& data) {
    FieldElement d = data.d_element();
    FieldElement g{Rational(data.deg_g)};
    RealAlgebraicNumber dr = data.d(), gr = RealAlgebraicNumber::from_rational(Rational(data.deg_g));
    RealAlgebraicNumber l1 = compare(dr, gr) == Ordering::Greater ? dr : gr;
    return {g, (g - d) * FieldElement(data.mu_min), d, d, {gr, dr}, l1};
}

struct DegreeIdentityReport {
    bool holds;
    FieldElement direct;  // delta * deg g
    FieldElement chow;    // (f^*F) . (f^*D)^{n-1}
};

/// deg f two ways: delta deg g, and the intersection number of
/// f^*F (f^*D)^{n-1}, which the relations reduce to d^{n-1} deg g.
inline DegreeIdentityReport degree_identity_check(const BundleEndoData& data, const Integer& c1 = 0) {
    ChowRing r(data.n, c1);
    PullbackAction act = pullback_action(data);
    FieldElement chow = intersection_number(act.image_F(r) * chow_pow(act.image_D(r), data.n - 1));
    FieldElement direct{data.deg_f()};
    return {chow == direct, direct, chow};
}

inline FieldElement field_pow(const FieldElement& x, unsigned k) {
    FieldElement r(1);
    for (unsigned i = 0; i < k; ++i) r = r * x;
    return r;
}

enum class Dichotomy { ForcedBaseEquality, SlopeBalanced, Both };

inline const char* to_string(Dichotomy d) {
    switch (d) {
    case Dichotomy::ForcedBaseEquality: return "ForcedBaseEquality";
    case Dichotomy::SlopeBalanced: return "SlopeBalanced";
    default: return "Both";
    }
}

/// With E = D - mu_min F an eigenvector for d, f^*(E^n) = d^n E^n and also
/// deg f E^n, where E^n = -(c1 + n mu_min). A nonzero key forces d = deg g.
struct DichotomyReport {
    Dichotomy kind;
    Rational key;           // c1 + n mu_min
    FieldElement lhs;       // d^n (c1 + n mu_min)
    FieldElement rhs;       // deg f (c1 + n mu_min)
    bool identity_holds;    // lhs == rhs
    bool base_equality;     // d == deg g, i.e. lambda1(f) = lambda1(g)
};

inline DichotomyReport dichotomy_classify(const BundleEndoData& data, const Integer& c1) {
    ChowRing r(data.n, c1);
    PullbackAction act = pullback_action(data);
    ChowElement e = ChowElement::D(r) - FieldElement(data.mu_min) * ChowElement::F(r);
    FieldElement en = intersection_number(chow_pow(e, data.n));  // -(c1 + n mu)
    FieldElement lhs = -(field_pow(act.d, data.n) * en);
    FieldElement rhs = -(FieldElement(data.deg_f()) * en);
    Rational key = Rational(c1) + Rational(data.n) * data.mu_min;
    bool base = act.d == FieldElement(Rational(data.deg_g));
    Dichotomy kind = sgn(key) != 0 ? Dichotomy::ForcedBaseEquality : (base ? Dichotomy::Both : Dichotomy::SlopeBalanced);
    return {kind, key, lhs, rhs, lhs == rhs, base};
}

/// Everything the bundle analysis reports for one (data, HN type).
struct BundleReport {
    SlopeStats stats;
    PullbackAction action;
    std::pair<ChowElement, ChowElement> nef;
    DegreeIdentityReport degree;
    DichotomyReport dichotomy;
    bool eigen_F;  // f^*F = deg g F
    bool eigen_E;  // f^*(D - mu_min F) = d (D - mu_min F)
    std::vector<std::string> notes;
};

/// The HN type supplies rank, c1 and mu_min; data.n and data.mu_min must agree.
inline BundleReport bundle_analyze(const BundleEndoData& data, const HNType& hn) {
    SlopeStats st = slope_stats(hn);
    ChowRing r = hn.ring();
    if (r.n != data.n) throw InvalidInput("HN type rank does not match n");
    if (st.mu_min != data.mu_min) throw InvalidInput("HN type mu_min does not match the data");
    PullbackAction act = pullback_action(data);
    auto nef = nef_generators(hn);
    BundleReport rep{st,
                     act,
                     nef,
                     degree_identity_check(data, r.c1),
                     dichotomy_classify(data, r.c1),
                     act.apply(nef.first) == act.a11 * nef.first,
                     act.apply(nef.second) == act.d * nef.second,
                     {}};
    if (!rep.dichotomy.identity_holds)
        rep.notes.push_back("no endomorphism has these invariants: d^n (c1 + n mu_min) != deg f (c1 + n mu_min)");
    if (st.semistable && sgn(r.c1) == 0)
        rep.notes.push_back("semistable of degree 0; over P^1 this is the trivial bundle");
    return rep;
}

} // namespace arithdyn
