#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arithdyn/io.hpp"

namespace arithdyn::cli {

using io::Json;
using io::RunConfig;

inline constexpr const char* kToolName = "arithdyn";
inline constexpr const char* kVersion = "0.1.0";

inline const System& require_system(const RunConfig& c) {
    if (!c.system) throw InvalidInput("this command needs a 'system' section");
    return *c.system;
}

/// A point by name or index; the first configured point by default.
inline const io::NamedPoint& select_point(const RunConfig& c, const std::string& key = "") {
    if (c.points.empty()) throw InvalidInput("this command needs at least one point");
    if (key.empty()) return c.points.front();
    for (const auto& p : c.points)
        if (p.name == key) return p;
    bool digits = key.find_first_not_of("0123456789") == std::string::npos;
    if (digits) {
        std::size_t i = std::stoul(key);
        if (i < c.points.size()) return c.points[i];
    }
    throw InvalidInput("no point named '" + key + "'");
}

/// Weight vectors of the divisor classes; the ample class (1, ..., 1) by default.
inline std::vector<std::vector<RationalInterval>> class_weights(const RunConfig& c) {
    std::size_t nf = ambient(require_system(c)).factors();
    if (c.options.classes.empty()) return {ample_weights(nf)};
    std::vector<std::vector<RationalInterval>> out;
    for (const auto& cl : c.options.classes) out.push_back(weight_enclosure(cl));
    return out;
}

inline Json point_json(const io::NamedPoint& p) { return Json{{"name", p.name}, {"coords", io::to_json(p.point)}}; }

inline Json matrix_info(const PullbackMap& f) {
    return Json{{"matrix", io::to_json(f.matrix())},
                {"mapping_degree", io::to_json(f.degree())},
                {"automorphism", f.is_automorphism()}};
}

// ---------------------------------------------------------------- lambda1

/// lambda_1 of the configured system, or of the lattice pullback when no
/// system is given.
inline Json cmd_lambda1(const RunConfig& c) {
    std::optional<PullbackMap> f;
    std::string source;
    if (c.system) {
        f = pullback_matrix(*c.system);
        source = c.system->kind();
    } else if (c.lattice) {
        f = c.lattice->pullback;
        source = "lattice";
    } else {
        throw InvalidInput("lambda1 needs a 'system' or a 'lattice' section");
    }
    Json j{{"source", source}};
    j.update(matrix_info(*f));
    j.update(io::lambda1_json(spectral_data(*f), c.options.lambda_width));
    return j;
}

// ---------------------------------------------------------------- orbit / alpha

inline OrbitRecord run_orbit(const RunConfig& c, const io::NamedPoint& p) {
    return iterate_orbit(require_system(c), p.point, c.options.N, class_weights(c), c.options.orbit());
}

inline Json orbit_rows_json(const OrbitRecord& r, std::size_t house_bits = 128) {
    Json rows = Json::array();
    for (const auto& e : r.entries) {
        Json houses = Json::array();
        auto hs = exact_houses(e, house_bits);
        for (std::size_t i = 0; i < e.log_houses.size(); ++i)
            houses.push_back(hs ? (*hs)[i].get_str() : "exp(" + io::fmt_double(to_double(e.log_houses[i].mid())) + ")");
        rows.push_back(Json{{"n", e.n}, {"houses", houses}, {"h", io::to_json_vec(e.heights)}, {"h_plus", io::to_json_vec(e.h_plus)}});
    }
    return rows;
}

/// alpha estimates per divisor class (absent below three entries), with the
/// upper-bound sanity check against lambda_1 at 5% slack.
inline Json alpha_summary(const System& s, const OrbitRecord& r) {
    RealAlgebraicNumber lam = spectral_radius(pullback_matrix(s));
    Rational lam_hi = refine(lam, pow2(-60)).hi();
    Json per = Json::array();
    for (std::size_t k = 0; k < r.classes.size(); ++k) {
        if (r.size() < 3) {
            per.push_back(nullptr);
            continue;
        }
        AlphaEstimate a = alpha_estimate(r, k);
        Json j = io::to_json(a);
        Rational bound = lam_hi * Rational(21, 20);
        j["upper_bound_sanity"] = a.root.mid() <= bound && a.ratio.mid() <= bound && a.normalized_root.mid() <= bound;
        per.push_back(j);
    }
    Json lj = io::to_json(lam);
    lj["poly"] = io::to_json(defining_factor(lam));
    return Json{{"lambda1", lj}, {"estimates", per}};
}

struct OrbitOutcome {
    OrbitRecord record;
    std::optional<ErrorKind> error_kind;  // set when the orbit stopped early
    std::string error;
};

inline OrbitOutcome orbit_outcome(const RunConfig& c, const io::NamedPoint& p) {
    try {
        return {run_orbit(c, p), std::nullopt, ""};
    } catch (const OrbitTruncated& e) {
        return {e.partial(), e.kind(), e.what()};
    }
}

inline Json orbit_report(const RunConfig& c, const io::NamedPoint& p, const OrbitOutcome& o, bool rows) {
    const System& s = require_system(c);
    Json classes = Json::array();
    for (const auto& w : o.record.classes) classes.push_back(io::to_json_vec(w));
    Json j{{"system_kind", s.kind()},
           {"point", point_json(p)},
           {"N", c.options.N},
           {"representation", to_string(c.options.representation)},
           {"classes", classes},
           {"length", o.record.size()},
           {"truncated", o.error_kind.has_value()},
           {"error", o.error_kind ? Json(o.error) : Json(nullptr)}};
    j["alpha"] = alpha_summary(s, o.record);
    if (rows) j["rows"] = orbit_rows_json(o.record);
    return j;
}

// ---------------------------------------------------------------- canonical heights

/// The cone orienting (nu_+, nu_-): the lattice cone if configured, else the
/// fiber-dual cone for Wehler systems and the orthant otherwise.
inline RationalCone orientation_cone(const RunConfig& c, const System& s, std::size_t rank) {
    if (c.lattice && c.lattice->cone && c.lattice->cone->ambient_dim() == rank) return *c.lattice->cone;
    if (const auto* w = s.as<WehlerSystem>()) return fiber_dual_cone(w->gram);
    return nonnegative_orthant(rank);
}

struct CanonicalSetup {
    std::optional<EigenvectorPair> pair;      // automorphisms satisfying Condition A
    std::vector<RationalInterval> weights;    // one-sided fallback
    RealAlgebraicNumber lambda = RealAlgebraicNumber::from_rational(Rational(0));
};

inline CanonicalSetup canonical_setup(const RunConfig& c) {
    const System& s = require_system(c);
    PullbackMap f = pullback_matrix(s);
    CanonicalSetup cs;
    cs.lambda = spectral_radius(f);
    if (f.is_automorphism() && is_invertible(s) && condition_A(f).holds) {
        cs.pair = eigenvector_pair(f, orientation_cone(c, s, f.rank()), c.options.eigen_width);
    } else {
        cs.weights = class_weights(c).front();
    }
    return cs;
}

inline CanonicalHeightResult canonical_at(const RunConfig& c, const CanonicalSetup& cs, const MultiProjPoint& p) {
    const System& s = require_system(c);
    if (cs.pair) return canonical_pair(s, p, *cs.pair, c.options.tate_N, c.options.orbit());
    return canonical_forward(s, p, cs.weights, cs.lambda, c.options.tate_N, c.options.orbit());
}

/// Canonical heights of the selected points with functional-equation
/// residuals for n in {0, +-1, +-2} (forward only when one-sided) and the
/// one-step ratio h+(fP) / h+(P).
inline Json cmd_canh(const RunConfig& c, const std::vector<std::string>& keys = {}) {
    const System& s = require_system(c);
    CanonicalSetup cs = canonical_setup(c);
    Json out{{"system_kind", s.kind()}};
    Json lj = io::to_json(cs.lambda, c.options.lambda_width);
    lj["poly"] = io::to_json(defining_factor(cs.lambda));
    out["lambda1"] = lj;
    out["mode"] = cs.pair ? "pair" : "forward";
    out["eigenvector_pair"] = cs.pair ? io::to_json(*cs.pair, c.options.eigen_width) : Json(nullptr);
    std::vector<const io::NamedPoint*> pts;
    if (keys.empty())
        for (const auto& p : c.points) pts.push_back(&p);
    else
        for (const auto& k : keys) pts.push_back(&select_point(c, k));
    if (pts.empty()) throw InvalidInput("canh needs at least one point");
    Json arr = Json::array();
    for (const auto* p : pts) {
        CanonicalHeightResult r = canonical_at(c, cs, p->point);
        Json pj = point_json(*p);
        pj["canonical"] = io::to_json(r);
        Json res = Json::array();
        std::vector<long> ns = cs.pair ? std::vector<long>{0, 1, -1, 2, -2} : std::vector<long>{0, 1, 2};
        Rational scale = std::max(Rational(1), r.hhat.magnitude());
        for (long n : ns) {
            RationalInterval v = functional_equation_residual(s, p->point, r, n);
            res.push_back(Json{{"n", n}, {"residual", io::to_json(v)}, {"contains_zero", v.contains_zero()},
                               {"relative_width", to_double(v.width() / scale)}});
        }
        pj["residuals"] = res;
        CanonicalHeightResult r1 = canonical_at(c, cs, apply(s, p->point));
        Json step{{"hhat_plus_next", io::to_json(r1.hhat_plus)}};
        if (r.hhat_plus.positive()) {
            RationalInterval ratio = (r1.hhat_plus / r.hhat_plus).rounded_out(128);
            step["ratio"] = io::to_json(ratio);
            step["overlaps_lambda1"] = ratio.overlaps(refine(cs.lambda, c.options.lambda_width));
        } else {
            step["ratio"] = nullptr;
            step["overlaps_lambda1"] = nullptr;
        }
        pj["equivariance"] = step;
        arr.push_back(std::move(pj));
    }
    out["points"] = arr;
    return out;
}

// ---------------------------------------------------------------- ks-verify

inline Json cmd_ks_verify(const RunConfig& c, const std::string& key = "") {
    const io::NamedPoint& p = select_point(c, key);
    KSOptions ko = c.options.ks();
    const System& s = require_system(c);
    if (c.lattice && c.lattice->cone && c.lattice->cone->ambient_dim() == pullback_matrix(s).rank()) ko.cone = c.lattice->cone;
    KSReport r = ks_report(s, p.point, ko);
    Json j{{"point", point_json(p)}};
    j.update(io::to_json(r, c.options.eigen_width));
    return j;
}

// ---------------------------------------------------------------- sweep-periodic

inline Json cmd_sweep_periodic(const RunConfig& c) {
    const System& s = require_system(c);
    SweepOptions so;
    so.house_bound = c.options.house_bound;
    so.max_period = c.options.max_period;
    so.workers = c.options.workers;
    so.tate_steps = c.options.tate_N;
    so.orbit = c.options.orbit();
    std::optional<CanonicalSetup> cs;
    try {
        cs = canonical_setup(c);
        so.pair = cs->pair;
    } catch (const PreconditionError&) {
        cs.reset();  // lambda_1 <= 1: no canonical heights
    }
    std::vector<SweepEntry> all = sweep_periodic(s, so);
    Json periodic = Json::array(), candidates = Json::array(), errors = Json::array();
    long n_pre = 0, n_not = 0;
    for (auto& e : all) {
        if (!e.error.empty()) {
            errors.push_back(Json{{"point", io::to_json(e.point)}, {"error", e.error}});
            continue;
        }
        switch (e.result.kind) {
        case PeriodicityKind::Periodic: {
            if (!e.canonical && cs) e.canonical = canonical_at(c, *cs, e.point);
            Json pj{{"point", io::to_json(e.point)}, {"period", e.result.period}};
            if (e.canonical) {
                pj["canonical"] = io::to_json(*e.canonical);
                RationalInterval slack = inflate(RationalInterval(Rational(0)), e.canonical->error_bound);
                pj["hhat_contains_zero_within_error"] = e.canonical->hhat.overlaps(slack);
            } else {
                pj["canonical"] = nullptr;
                pj["hhat_contains_zero_within_error"] = nullptr;
            }
            periodic.push_back(std::move(pj));
            break;
        }
        case PeriodicityKind::Preperiodic: ++n_pre; break;
        case PeriodicityKind::BoundedOrbitCandidate: candidates.push_back(io::to_json(e.point)); break;
        default: ++n_not;
        }
    }
    Json summary{{"examined", all.size()},          {"periodic", periodic.size()},
                 {"preperiodic", n_pre},            {"not_periodic", n_not},
                 {"bounded_orbit_candidates", candidates.size()}, {"errors", errors.size()}};
    return Json{{"system_kind", s.kind()},
                {"house_bound", io::to_json(c.options.house_bound)},
                {"max_period", c.options.max_period},
                {"summary", summary},
                {"periodic", periodic},
                {"bounded_orbit_candidates", candidates},
                {"errors", errors}};
}

// ---------------------------------------------------------------- bundle

inline Json bundle_case_json(const io::BundleCase& b) {
    Json j{{"name", b.name}};
    j.update(io::to_json(bundle_analyze(b.data, b.hn), b.data));
    return j;
}

inline Json cmd_bundle(const RunConfig& c) {
    if (c.bundles.empty()) throw InvalidInput("bundle needs a 'bundle' section with cases");
    Json cases = Json::array();
    for (const auto& b : c.bundles) cases.push_back(bundle_case_json(b));
    return Json{{"cases", cases}};
}

// ---------------------------------------------------------------- lattice

inline Json cmd_lattice(const RunConfig& c) {
    if (!c.lattice) throw InvalidInput("lattice needs a 'lattice' section");
    const io::LatticeConfig& L = c.lattice.value();
    const PullbackMap& f = L.pullback;
    const Rational& eps = c.options.eigen_width;
    Json j = matrix_info(f);
    SpectralData sd = spectral_data(f);
    j.update(io::lambda1_json(sd, c.options.lambda_width));
    j["form_multiplicative"] = L.form ? Json(L.form->multiplicative_under(to_rational(f.matrix()), Rational(f.degree()))) : Json(nullptr);
    j["condition_A"] = nullptr;
    j["eigenvector_pair"] = nullptr;
    j["condition_B"] = nullptr;
    j["middle_index"] = nullptr;
    j["leading_eigenvector"] = nullptr;
    j["hilbert_extension_preserves_lambda1"] = nullptr;
    Json warnings = Json::array();
    bool expanding = compare(sd.radius, Rational(1)) == Ordering::Greater;
    if (f.is_automorphism()) {
        ConditionAReport a = condition_A(f);
        j["condition_A"] = io::to_json(a);
        j["hilbert_extension_preserves_lambda1"] = compare(spectral_radius(hilbert_extension(f)), sd.radius) == Ordering::Equal;
        if (a.holds) {
            RationalCone k = L.cone ? *L.cone : nonnegative_orthant(f.rank());
            EigenvectorPair pair = eigenvector_pair(f, k, eps);
            j["eigenvector_pair"] = io::to_json(pair, eps);
            if (L.form) {
                ConditionBReport b = condition_B(*L.form, pair, k);
                j["condition_B"] = io::to_json(b);
                if (b.verdict == Verdict::True) j["middle_index"] = io::to_json(middle_index_ell(*L.form, pair));
            }
            if (c.bbform) {
                const auto& bb = c.bbform->form;
                Json bj{{"signature", io::to_json(signature(bb.gram()))}, {"isometry", isometry_check(f, bb)}};
                if (isometry_check(f, bb)) bj["isotropy_bigness"] = io::to_json(isotropy_and_bigness_report(bb, pair));
                j["bbform"] = bj;
            }
        } else {
            warnings.push_back("Condition A fails; no eigenvector pair");
        }
    } else if (expanding && L.cone) {
        j["leading_eigenvector"] = io::to_json(leading_eigenvector_in_cone(f, *L.cone, eps), eps);
    }
    if (c.bbform && !j.contains("bbform")) {
        const auto& bb = c.bbform->form;
        j["bbform"] = Json{{"signature", io::to_json(signature(bb.gram()))}, {"isometry", isometry_check(f, bb)}};
    }
    j["warnings"] = warnings;
    return j;
}

// ---------------------------------------------------------------- chow

inline Json chow_expression_json(const ChowRing& r, const std::string& text) {
    ChowElement e = io::parse_chow_expression(r, text);
    Json j{{"expression", text}, {"result", io::to_json(e)}};
    j["intersection_number"] = e.is_homogeneous(r.n) && !e.is_zero() ? Json(to_string(intersection_number(e)))
                                                                      : (e.is_zero() ? Json("0") : Json(nullptr));
    return j;
}

inline Json cmd_chow(const ChowRing& r, const std::vector<std::string>& exprs) {
    ChowElement f = ChowElement::F(r), d = ChowElement::D(r);
    Json rel{{"F^2", io::to_json(f * f)},
             {"F*D^(n-1)", to_string(intersection_number(f * chow_pow(d, r.n - 1)))},
             {"D^n", to_string(intersection_number(chow_pow(d, r.n)))}};
    Json arr = Json::array();
    for (const auto& e : exprs) arr.push_back(chow_expression_json(r, e));
    return Json{{"n", r.n}, {"c1", io::to_json(r.c1)}, {"relations", rel}, {"expressions", arr}};
}

inline Json cmd_chow(const RunConfig& c) {
    if (!c.chow) throw InvalidInput("chow needs a 'chow' section");
    return cmd_chow(c.chow->ring, c.chow->expressions);
}

// ---------------------------------------------------------------- envelope

/// Wraps a report; the timestamp is omitted in reproducible mode so that
/// identical inputs give byte-identical output.
inline Json envelope(const std::string& command, const std::string& config_name, Json report,
                     const std::optional<std::string>& timestamp) {
    Json j{{"tool", kToolName}, {"version", kVersion}, {"command", command}, {"config", config_name}};
    if (timestamp) j["generated_at"] = *timestamp;
    j["report"] = std::move(report);
    return j;
}

} // namespace arithdyn::cli
