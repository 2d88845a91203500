#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "arithdyn/candyn.hpp"
#include "arithdyn/projbundle.hpp"

namespace arithdyn::io {

/// Key order is insertion order, so identical inputs dump byte-identically.
using Json = nlohmann::ordered_json;

/// Integers that fit in 64 bits are JSON numbers, larger ones decimal strings.
inline Json to_json(const Integer& x) {
    if (x.fits_slong_p()) return x.get_si();
    return x.get_str();
}

inline Json to_json(const Rational& x) { return to_string(x); }

inline Json to_json(const RationalInterval& x) {
    return Json{{"lo", to_string(x.lo())}, {"hi", to_string(x.hi())}, {"approx", to_double(x.mid())},
                {"width", to_double(x.width())}};
}

inline Json to_json(const IntPolynomial& p) {
    Json a = Json::array();
    for (const auto& c : p.coeffs()) a.push_back(to_json(c));
    return a;
}

/// {poly, lo, hi, approx}: the defining polynomial (constant term first) and
/// an isolating interval.
inline Json to_json(const RealAlgebraicNumber& x) {
    return Json{{"poly", to_json(x.poly())},
                {"lo", to_string(x.interval().lo())},
                {"hi", to_string(x.interval().hi())},
                {"approx", x.to_double()}};
}

/// A real algebraic number with an extra enclosure of width <= eps.
inline Json to_json(const RealAlgebraicNumber& x, const Rational& eps) {
    Json j = to_json(x);
    j["enclosure"] = to_json(refine(x, eps));
    return j;
}

inline Json to_json(const FieldElement& x) {
    Json j{{"value", to_string(x)}, {"approx", x.to_double()}};
    if (x.field()) j["field"] = to_json(x.field()->alpha);
    return j;
}

template <class T>
Json to_json(const Matrix<T>& m) {
    Json a = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        a.push_back(std::move(row));
    }
    return a;
}

template <class T>
Json to_json_vec(const std::vector<T>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

inline Json to_json(const MultiProjPoint& p) {
    Json a = Json::array();
    for (const auto& t : p.factors()) a.push_back(to_json_vec(t));
    return a;
}

inline Json to_json(const DivisorClass& d, const Rational& eps) {
    Json coords = Json::array();
    for (const auto& c : d.coords) {
        Json e = to_json(c);
        e["enclosure"] = to_json(c.enclose(eps));
        coords.push_back(std::move(e));
    }
    return coords;
}

inline std::string factorization_string(const IntPolynomial& p) {
    RationalSplit s = split_rational_roots(p);
    std::string out;
    auto factor = [&](const IntPolynomial& f, unsigned e) {
        out += "(" + to_string(f) + ")";
        if (e > 1) out += "^" + std::to_string(e);
    };
    for (const auto& [f, e] : s.linear) factor(f, e);
    if (s.rest.degree() > 0 || out.empty()) factor(s.rest, 1);
    return out;
}

/// {charpoly, char_poly_factor, lambda1 {poly, lo, hi, approx, enclosure}}.
inline Json lambda1_json(const SpectralData& sd, const Rational& eps) {
    Json factors = Json::array();
    RationalSplit s = split_rational_roots(sd.charpoly);
    for (const auto& [f, e] : s.linear) factors.push_back(Json{{"poly", to_json(f)}, {"multiplicity", e}});
    if (s.rest.degree() > 0) factors.push_back(Json{{"poly", to_json(s.rest)}, {"multiplicity", 1}});
    Json lam = to_json(sd.radius, eps);
    lam["poly"] = to_json(defining_factor(sd.radius));
    return Json{{"charpoly", to_json(sd.charpoly)},
                {"char_poly_factor", factorization_string(sd.charpoly)},
                {"factors", factors},
                {"lambda1", lam},
                {"attained_by_positive_eigenvalue", sd.attained_by_positive_eigenvalue}};
}

inline Json to_json(const ConditionAReport& r) {
    return Json{{"holds", r.holds},
                {"lambda_f", to_json(r.lambda_f)},
                {"lambda_f_inv", to_json(r.lambda_f_inv)},
                {"lambda_exceeds_one", r.lambda_exceeds_one},
                {"radii_equal", r.radii_equal},
                {"comparison", to_string(compare(r.lambda_f, r.lambda_f_inv))}};
}

inline Json to_json(const ConditionBReport& r) {
    return Json{{"verdict", to_string(r.verdict)}, {"volume", to_json(r.volume)}, {"exact", r.exact}, {"in_cone", r.in_cone}};
}

inline Json to_json(const MiddleIndexReport& r) {
    return Json{{"ell", r.ell},
                {"identity_holds", r.identity_holds},
                {"identity_certified", r.identity_certified},
                {"mixed", to_json_vec(r.mixed)},
                {"mixed_sign", r.mixed_sign},
                {"exact", r.exact}};
}

inline Json to_json(const EigenvectorPair& p, const Rational& eps) {
    return Json{{"lambda_plus", to_json(p.lambda_plus)},
                {"lambda_minus", to_json(p.lambda_minus)},
                {"nu_plus", to_json(p.nu_plus, eps)},
                {"nu_minus", to_json(p.nu_minus, eps)}};
}

inline Json to_json(const Inertia& s) { return Json{{"pos", s.pos}, {"neg", s.neg}, {"zero", s.zero}}; }

inline Json to_json(const IsotropyBignessReport& r) {
    return Json{{"q_plus_zero", r.q_plus_zero}, {"q_minus_zero", r.q_minus_zero}, {"q_plus", to_json(r.q_plus)},
                {"q_minus", to_json(r.q_minus)}, {"big", to_string(r.big)},          {"q_sum", to_json(r.q_sum)},
                {"middle", to_json(r.middle)}};
}

inline Json to_json(const AlphaEstimate& a) {
    return Json{{"n", a.n},
                {"root_estimate", to_json(a.root)},
                {"normalized_root_estimate", to_json(a.normalized_root)},
                {"ratio_estimate", to_json(a.ratio)}};
}

/// Upper bounds are published rounded up to multiples of 2^-64; they stay
/// valid bounds and keep the report readable.
inline Json bound_json(const Rational& x) { return to_json(dyadic_ceil(x, 64)); }

inline Json to_json(const TateResult& t) {
    return Json{{"value", to_json(t.value)},
                {"enclosure", to_json(t.enclosure)},
                {"tate_constant", bound_json(t.tate_constant)},
                {"error_bound", bound_json(t.error_bound)},
                {"iterations", t.iterations},
                {"error_bound_kind", t.empirical ? "empirical" : "exact"}};
}

inline Json to_json(const CanonicalHeightResult& r) {
    Json j{{"hhat_plus", to_json(r.hhat_plus)},
           {"hhat_minus", to_json(r.hhat_minus)},
           {"hhat", to_json(r.hhat)},
           {"iterations", r.iterations},
           {"tate_constant", bound_json(r.tate_constant)},
           {"error_bound", bound_json(r.error_bound)},
           {"error_bound_kind", "empirical"},
           {"one_sided", r.one_sided},
           {"plus", to_json(r.plus)}};
    j["minus"] = r.minus ? to_json(*r.minus) : Json(nullptr);
    return j;
}

inline Json to_json(const DensityReport& d) {
    return Json{{"verdict", to_string(d.verdict)}, {"certified", d.certified}, {"evidence", d.evidence}};
}

inline Json to_json(const FiberedCheck& f) {
    return Json{{"alpha_total", to_json(f.alpha_total)},
                {"alpha_base", to_json(f.alpha_base)},
                {"slack", to_json(f.slack)},
                {"holds", f.holds}};
}

template <class T>
Json optional_json(const std::optional<T>& x) {
    return x ? to_json(*x) : Json(nullptr);
}

inline Json to_json(const KSReport& r, const Rational& eps) {
    Json j{{"system_kind", r.system_kind}};
    Json lam = to_json(r.lambda1);
    lam["poly"] = to_json(defining_factor(r.lambda1));
    lam["interval"] = to_json(r.lambda1_interval);
    j["lambda1"] = lam;
    j["charpoly"] = to_json(r.charpoly);
    j["char_poly_factor"] = factorization_string(r.charpoly);
    j["alpha"] = optional_json(r.alpha);
    j["conditions"] = Json{{"A", optional_json(r.condition_a)}, {"B", optional_json(r.condition_b)}};
    j["eigenvector_pair"] = r.pair ? to_json(*r.pair, eps) : Json(nullptr);
    j["canonical"] = optional_json(r.canonical);
    j["canonical_alpha"] = optional_json(r.canonical_alpha);
    j["fibered"] = optional_json(r.fibered);
    j["density_heuristic"] = to_json(r.density);
    j["verdict"] = to_string(r.verdict);
    j["verdict_text"] = r.verdict_text;
    j["warnings"] = r.warnings;
    return j;
}

inline Json to_json(const PeriodicityResult& r) {
    return Json{{"kind", to_string(r.kind)},
                {"period", r.period},
                {"preperiod", r.preperiod},
                {"escape_index", r.escape_index},
                {"max_house", to_json(r.max_house)}};
}

inline Json to_json(const SweepEntry& e) {
    Json j{{"point", to_json(e.point)}, {"result", to_json(e.result)}};
    j["canonical"] = optional_json(e.canonical);
    if (!e.error.empty()) j["error"] = e.error;
    return j;
}

inline Json to_json(const ChowElement& e) {
    Json p = Json::array(), q = Json::array();
    for (const auto& c : e.p()) p.push_back(to_string(c));
    for (const auto& c : e.q()) q.push_back(to_string(c));
    return Json{{"n", e.ring().n}, {"c1", to_json(e.ring().c1)}, {"p", p}, {"q", q}, {"text", e.str()}};
}

inline Json to_json(const SlopeStats& s) {
    return Json{{"mu_min", to_json(s.mu_min)}, {"mu_max", to_json(s.mu_max)}, {"mu", to_json(s.mu)}, {"semistable", s.semistable}};
}

inline Json to_json(const DichotomyReport& d) {
    return Json{{"kind", to_string(d.kind)},   {"key", to_json(d.key)},
                {"lhs", to_json(d.lhs)},       {"rhs", to_json(d.rhs)},
                {"identity_holds", d.identity_holds}, {"base_equality", d.base_equality}};
}

inline Json to_json(const DegreeIdentityReport& d) {
    return Json{{"holds", d.holds}, {"direct", to_json(d.direct)}, {"chow", to_json(d.chow)}};
}

/// {action_matrix, eigenvalues, lambda1, nef_generators, dichotomy, degree_check, ...}.
inline Json to_json(const BundleReport& r, const BundleEndoData& data) {
    const auto& a = r.action;
    Json matrix = Json::array({Json::array({to_json(a.a11), to_json(a.a12)}), Json::array({to_json(FieldElement(0)), to_json(a.a22)})});
    return Json{{"input", Json{{"n", data.n}, {"deg_g", to_json(data.deg_g)}, {"delta", to_json(data.delta)},
                               {"mu_min", to_json(data.mu_min)}}},
                {"d", to_json(data.d())},
                {"action_matrix", matrix},
                {"basis", Json::array({"F", "D"})},
                {"eigenvalues", to_json_vec(a.eigenvalues)},
                {"lambda1", to_json(a.lambda1)},
                {"nef_generators", Json::array({to_json(r.nef.first), to_json(r.nef.second)})},
                {"eigenvectors", Json{{"F", r.eigen_F}, {"D_minus_mu_min_F", r.eigen_E}}},
                {"slopes", to_json(r.stats)},
                {"dichotomy", to_json(r.dichotomy)},
                {"degree_check", to_json(r.degree)},
                {"notes", r.notes}};
}

} // namespace arithdyn::io
