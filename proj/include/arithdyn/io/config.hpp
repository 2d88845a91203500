#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "arithdyn/io/serialize.hpp"

namespace arithdyn::io {

/// Integers may be JSON integers or decimal strings (for values beyond 64 bits).
inline Integer parse_integer_json(const Json& j, const std::string& what) {
    if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
    if (j.is_string()) return parse_integer(j.get<std::string>());
    throw InvalidInput(what + ": expected an integer");
}

/// Rationals may be integers, "p/q", or decimal strings such as "1e-8".
/// Floating-point literals are read through their shortest decimal form.
inline Rational parse_rational_json(const Json& j, const std::string& what) {
    if (j.is_number_integer()) return Rational(parse_integer_json(j, what));
    if (j.is_number_float()) return parse_rational(j.dump());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw InvalidInput(what + ": expected a rational");
}

inline unsigned parse_unsigned_json(const Json& j, const std::string& what) {
    Integer x = parse_integer_json(j, what);
    if (sgn(x) < 0 || !x.fits_uint_p()) throw InvalidInput(what + ": expected a small nonnegative integer");
    return static_cast<unsigned>(x.get_ui());
}

template <class T, class F>
Matrix<T> parse_matrix_json(const Json& j, const std::string& what, F&& elem) {
    if (!j.is_array() || j.empty()) throw InvalidInput(what + ": expected a nonempty matrix");
    std::vector<std::vector<T>> rows;
    for (const auto& r : j) {
        if (!r.is_array()) throw InvalidInput(what + ": rows must be arrays");
        std::vector<T> row;
        for (const auto& x : r) row.push_back(elem(x, what));
        if (!rows.empty() && row.size() != rows.front().size()) throw InvalidInput(what + ": ragged matrix");
        rows.push_back(std::move(row));
    }
    return Matrix<T>::from_rows(rows);
}

inline IntMatrix parse_int_matrix(const Json& j, const std::string& what) {
    return parse_matrix_json<Integer>(j, what, parse_integer_json);
}

inline RatMatrix parse_rat_matrix(const Json& j, const std::string& what) {
    return parse_matrix_json<Rational>(j, what, parse_rational_json);
}

inline Vec<Rational> parse_rat_vector(const Json& j, const std::string& what) {
    if (!j.is_array()) throw InvalidInput(what + ": expected an array");
    Vec<Rational> v;
    for (const auto& x : j) v.push_back(parse_rational_json(x, what));
    return v;
}

inline MultiProjPoint parse_point_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw InvalidInput("point: expected an array of coordinate tuples");
    std::vector<MultiProjPoint::Tuple> f;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() < 2) throw InvalidInput("point: each factor needs at least two coordinates");
        MultiProjPoint::Tuple tup;
        for (const auto& x : t) tup.push_back(parse_integer_json(x, "point"));
        f.push_back(std::move(tup));
    }
    return MultiProjPoint(std::move(f));
}

/// 27 coefficients c[a][b][e] (a-major) or a nested 3x3x3 array.
inline WehlerForm::Cube parse_wehler_coeffs(const Json& j) {
    WehlerForm::Cube c;
    std::vector<Integer> flat;
    auto collect = [&](const auto& self, const Json& x) -> void {
        if (x.is_array())
            for (const auto& y : x) self(self, y);
        else
            flat.push_back(parse_integer_json(x, "wehler coeffs"));
    };
    collect(collect, j);
    if (flat.size() != 27) throw InvalidInput("wehler coeffs: expected 27 coefficients");
    for (std::size_t i = 0; i < 27; ++i) c[i / 9][(i / 3) % 3][i % 3] = flat[i];
    return c;
}

inline System parse_system_json(const Json& j) {
    if (!j.is_object() || !j.contains("type")) throw InvalidInput("system: missing type");
    std::string t = j["type"].get<std::string>();
    if (t == "monomial") return MonomialSystem(parse_int_matrix(j.at("matrix"), "monomial matrix"));
    if (t == "power") return PowerSystem(parse_unsigned_json(j.at("degree"), "power degree"), parse_unsigned_json(j.at("dim"), "power dim"));
    if (t == "wehler") {
        std::vector<int> word;
        for (const auto& x : j.at("word")) word.push_back(static_cast<int>(parse_unsigned_json(x, "wehler word")));
        std::array<IntMatrix, 3> ms = WehlerSystem::standard_matrices();
        if (j.contains("involution_matrices")) {
            const Json& m = j["involution_matrices"];
            if (!m.is_array() || m.size() != 3) throw InvalidInput("wehler involution_matrices: expected three matrices");
            for (std::size_t i = 0; i < 3; ++i) ms[i] = parse_int_matrix(m[i], "involution matrix");
        }
        IntMatrix g = j.contains("gram") ? parse_int_matrix(j["gram"], "wehler gram") : WehlerSystem::standard_gram();
        return WehlerSystem(WehlerForm(parse_wehler_coeffs(j.at("coeffs"))), std::move(word), std::move(ms), std::move(g));
    }
    if (t == "product") return System::product(parse_system_json(j.at("left")), parse_system_json(j.at("right")));
    throw InvalidInput("system: unknown type '" + t + "'");
}

struct PointExpectation {
    std::optional<bool> on_surface;
    std::optional<bool> periodic;
    std::optional<long> period;
};

struct NamedPoint {
    std::string name;
    MultiProjPoint point;
    PointExpectation expect;
};

/// Every tolerance and bound a command may use, with its default.
struct RunOptions {
    long N = 25;                                    // orbit length
    long tate_N = 8;                                // Tate iterations
    long alpha_steps = 10;                          // orbit length inside ks-verify
    Rational eigen_width = parse_rational("1e-8");  // eigenvector enclosures
    Rational log_width = parse_rational("1e-12");   // log evaluation, relative
    Rational lambda_width = parse_rational("1e-12");
    std::size_t cap_bits = 1000000;                 // per-coordinate cap, exact orbits
    std::size_t switch_bits = 4096;
    unsigned local_bits = 256;
    Representation representation = Representation::Auto;
    Integer house_bound = 3;
    long max_period = 6;
    unsigned workers = 1;
    unsigned density_degree = 2;
    Rational fibered_slack = Rational(1, 20);
    Rational consistency_tol = Rational(1, 20);
    std::vector<std::vector<Rational>> classes;  // empty: the ample class (1, ..., 1)

    OrbitOptions orbit() const {
        OrbitOptions o;
        o.cap_bits = cap_bits;
        o.representation = representation;
        o.log_prec = precision_for(log_width);
        o.local_bits = local_bits;
        o.switch_bits = switch_bits;
        return o;
    }
    KSOptions ks() const {
        KSOptions k;
        k.alpha_steps = alpha_steps;
        k.tate_steps = tate_N;
        k.eigen_eps = eigen_width;
        k.fibered_slack = fibered_slack;
        k.consistency_tol = consistency_tol;
        k.density_degree = density_degree;
        k.orbit = orbit();
        return k;
    }
};

struct LatticeConfig {
    PullbackMap pullback;
    std::optional<TopIntersectionForm> form;
    std::optional<RationalCone> cone;
    Json source;
};

struct BBFormConfig {
    BeauvilleBogomolovForm form;
    Json source;
};

struct BundleCase {
    std::string name;
    BundleEndoData data;
    HNType hn;
};

struct ChowConfig {
    ChowRing ring;
    std::vector<std::string> expressions;
};

struct RunConfig {
    std::string name;
    std::optional<Json> system_source;
    std::optional<System> system;
    std::vector<NamedPoint> points;
    RunOptions options;
    std::optional<LatticeConfig> lattice;
    std::optional<BBFormConfig> bbform;
    std::vector<BundleCase> bundles;
    std::optional<ChowConfig> chow;
};

inline Representation parse_representation(const std::string& s) {
    if (s == "auto") return Representation::Auto;
    if (s == "exact") return Representation::Exact;
    if (s == "compact") return Representation::Compact;
    throw InvalidInput("representation must be auto, exact or compact");
}

inline RunOptions parse_options(const Json& j) {
    RunOptions o;
    auto pos_long = [&](const char* key, long& dst) {
        if (!j.contains(key)) return;
        Integer v = parse_integer_json(j[key], key);
        if (sgn(v) <= 0 || !v.fits_slong_p()) throw InvalidInput(std::string(key) + " must be a positive integer");
        dst = v.get_si();
    };
    auto pos_rat = [&](const char* key, Rational& dst) {
        if (!j.contains(key)) return;
        dst = parse_rational_json(j[key], key);
        if (sgn(dst) <= 0) throw InvalidInput(std::string(key) + " must be positive");
    };
    pos_long("N", o.N);
    pos_long("tate_N", o.tate_N);
    pos_long("alpha_steps", o.alpha_steps);
    pos_long("max_period", o.max_period);
    pos_rat("eigen_width", o.eigen_width);
    pos_rat("log_width", o.log_width);
    pos_rat("lambda_width", o.lambda_width);
    pos_rat("fibered_slack", o.fibered_slack);
    pos_rat("consistency_tol", o.consistency_tol);
    if (j.contains("cap_bits")) o.cap_bits = parse_unsigned_json(j["cap_bits"], "cap_bits");
    if (j.contains("switch_bits")) o.switch_bits = parse_unsigned_json(j["switch_bits"], "switch_bits");
    if (j.contains("local_bits")) o.local_bits = parse_unsigned_json(j["local_bits"], "local_bits");
    if (j.contains("representation")) o.representation = parse_representation(j["representation"].get<std::string>());
    if (j.contains("house_bound")) o.house_bound = parse_integer_json(j["house_bound"], "house_bound");
    if (j.contains("workers")) o.workers = parse_unsigned_json(j["workers"], "workers");
    if (j.contains("density_degree")) o.density_degree = parse_unsigned_json(j["density_degree"], "density_degree");
    if (j.contains("classes"))
        for (const auto& c : j["classes"]) o.classes.push_back(parse_rat_vector(c, "classes"));
    if (sgn(o.house_bound) < 0) throw InvalidInput("house_bound must be nonnegative");
    if (o.workers == 0) throw InvalidInput("workers must be positive");
    if (o.density_degree < 1 || o.density_degree > 4) throw InvalidInput("density_degree must be in 1..4");
    if (o.cap_bits == 0) throw InvalidInput("cap_bits must be positive");
    return o;
}

inline Json options_json(const RunOptions& o) {
    Json classes = Json::array();
    for (const auto& c : o.classes) classes.push_back(to_json_vec(c));
    return Json{{"N", o.N},
                {"tate_N", o.tate_N},
                {"alpha_steps", o.alpha_steps},
                {"eigen_width", to_string(o.eigen_width)},
                {"log_width", to_string(o.log_width)},
                {"lambda_width", to_string(o.lambda_width)},
                {"cap_bits", o.cap_bits},
                {"switch_bits", o.switch_bits},
                {"local_bits", o.local_bits},
                {"representation", to_string(o.representation)},
                {"house_bound", to_json(o.house_bound)},
                {"max_period", o.max_period},
                {"workers", o.workers},
                {"density_degree", o.density_degree},
                {"fibered_slack", to_string(o.fibered_slack)},
                {"consistency_tol", to_string(o.consistency_tol)},
                {"classes", classes}};
}

inline LatticeConfig parse_lattice(const Json& j) {
    IntMatrix m = parse_int_matrix(j.at("pullback"), "lattice pullback");
    Integer degree = j.contains("degree") ? parse_integer_json(j["degree"], "lattice degree") : Integer(1);
    bool aut = j.value("automorphism", degree == 1 && (det(m) == 1 || det(m) == -1));
    LatticeConfig c{PullbackMap(m, degree, aut), std::nullopt, std::nullopt, j};
    std::size_t rho = m.rows();
    if (j.contains("basis_dim") && parse_unsigned_json(j["basis_dim"], "basis_dim") != rho)
        throw InvalidInput("lattice basis_dim does not match the pullback matrix");
    if (j.contains("gram")) {
        c.form = TopIntersectionForm::from_gram(parse_rat_matrix(j["gram"], "lattice gram"));
    } else if (j.contains("form")) {
        std::size_t d = parse_unsigned_json(j.at("dim_X"), "dim_X");
        TopIntersectionForm f(rho, d);
        for (const auto& e : j["form"]) {
            TopIntersectionForm::Key k;
            for (const auto& i : e.at("indices")) k.push_back(parse_unsigned_json(i, "form index"));
            f.set(k, parse_rational_json(e.at("value"), "form value"));
        }
        c.form = std::move(f);
    }
    if (c.form && c.form->rho() != rho) throw InvalidInput("form rank does not match the pullback matrix");
    if (c.form && !c.form->multiplicative_under(to_rational(m), Rational(degree)))
        throw InvalidInput("pullback does not satisfy form multiplicativity with the given degree");
    if (j.contains("cone")) {
        std::vector<Vec<Rational>> gens;
        for (const auto& g : j["cone"]) gens.push_back(parse_rat_vector(g, "cone generator"));
        c.cone = RationalCone(std::move(gens));
        if (c.cone->ambient_dim() != rho) throw InvalidInput("cone generators have the wrong length");
    }
    return c;
}

/// "[(r1,d1),(r2,d2)]" or "[[r1,d1],...]": the HN graded pieces.
inline HNType parse_hn_string(const std::string& s) {
    std::string t;
    for (char ch : s) t += (ch == '(' ? '[' : ch == ')' ? ']' : ch);
    Json j;
    try {
        j = Json::parse(t);
    } catch (const std::exception&) {
        throw InvalidInput("cannot parse HN type '" + s + "'");
    }
    std::vector<HNType::Piece> pieces;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2) throw InvalidInput("HN pieces are (rank, degree) pairs");
        pieces.push_back({parse_integer_json(p[0], "HN rank"), parse_integer_json(p[1], "HN degree")});
    }
    return HNType(std::move(pieces));
}

inline HNType parse_hn_json(const Json& j) {
    if (j.is_string()) return parse_hn_string(j.get<std::string>());
    return parse_hn_string(j.dump());
}

/// A bundle endomorphism case; n and mu_min come from the HN type.
inline BundleCase make_bundle_case(std::string name, const Integer& deg_g, const Rational& delta, const HNType& hn,
                                   std::optional<unsigned> n = std::nullopt) {
    unsigned rank = hn.ring().n;
    if (n && *n != rank) throw InvalidInput("n does not match the rank of the HN type");
    return BundleCase{std::move(name), BundleEndoData(rank, deg_g, delta, slope_stats(hn).mu_min), hn};
}

inline BundleCase parse_bundle_case(const Json& j, std::size_t idx) {
    std::optional<unsigned> n;
    if (j.contains("n")) n = parse_unsigned_json(j["n"], "bundle n");
    return make_bundle_case(j.value("name", "case" + std::to_string(idx)), parse_integer_json(j.at("deg_g"), "deg_g"),
                            parse_rational_json(j.at("delta"), "delta"), parse_hn_json(j.at("hn")), n);
}

/// Checks declared facts about sample points: on-surface membership and
/// periodicity (by exact iteration).
inline void assert_point_expectations(const RunConfig& c) {
    for (const auto& p : c.points) {
        if (c.system) detail::require_shape(*c.system, p.point);
        if (p.expect.on_surface) {
            const WehlerSystem* w = c.system ? c.system->as<WehlerSystem>() : nullptr;
            if (!w) throw InvalidInput("point '" + p.name + "': on_surface needs a wehler system");
            if (w->on_surface(p.point) != *p.expect.on_surface)
                throw InvalidInput("point '" + p.name + "': on_surface expectation fails");
        }
        if (p.expect.periodic) {
            if (!c.system) throw InvalidInput("point '" + p.name + "': periodic expectation needs a system");
            long maxp = std::max(c.options.max_period, p.expect.period.value_or(1));
            PeriodicityResult r = periodicity_test(*c.system, p.point, c.options.house_bound, maxp);
            bool periodic = r.kind == PeriodicityKind::Periodic;
            if (periodic != *p.expect.periodic) throw InvalidInput("point '" + p.name + "': periodic expectation fails");
            if (periodic && p.expect.period && r.period != *p.expect.period)
                throw InvalidInput("point '" + p.name + "': expected period " + std::to_string(*p.expect.period) +
                                   ", found " + std::to_string(r.period));
        }
    }
}

/// Builds a RunConfig from an already schema-validated document and asserts
/// every declared invariant.
inline RunConfig parse_run_config(const Json& doc) {
    if (!doc.is_object()) throw InvalidInput("config must be a JSON object");
    Json j = doc;  // null sections (as printed by config_json) mean absent
    for (auto it = j.begin(); it != j.end();) it = it->is_null() ? j.erase(it) : std::next(it);
    RunConfig c;
    c.name = j.value("name", "");
    if (j.contains("options")) c.options = parse_options(j["options"]);
    if (j.contains("system")) {
        c.system_source = j["system"];
        c.system = parse_system_json(j["system"]);
    }
    if (j.contains("points")) {
        std::size_t i = 0;
        for (const auto& p : j["points"]) {
            NamedPoint np{p.value("name", "P" + std::to_string(i)), parse_point_json(p.at("coords")), {}};
            if (p.contains("expect")) {
                const Json& e = p["expect"];
                if (e.contains("on_surface")) np.expect.on_surface = e["on_surface"].get<bool>();
                if (e.contains("periodic")) np.expect.periodic = e["periodic"].get<bool>();
                if (e.contains("period")) np.expect.period = static_cast<long>(parse_unsigned_json(e["period"], "period"));
            }
            c.points.push_back(std::move(np));
            ++i;
        }
    }
    if (c.system) {
        std::size_t nf = ambient(*c.system).factors();
        for (const auto& cl : c.options.classes)
            if (cl.size() != nf) throw InvalidInput("divisor class weights must have one entry per factor");
    }
    if (j.contains("lattice")) c.lattice = parse_lattice(j["lattice"]);
    if (j.contains("bbform")) {
        const Json& b = j["bbform"];
        c.bbform = BBFormConfig{BeauvilleBogomolovForm(parse_rat_matrix(b.at("gram"), "bbform gram"),
                                                      parse_rational_json(b.at("fujiki_c"), "fujiki_c"),
                                                      parse_unsigned_json(b.at("m"), "m")),
                                b};
    }
    if (j.contains("bundle")) {
        std::size_t i = 0;
        for (const auto& b : j["bundle"].at("cases")) c.bundles.push_back(parse_bundle_case(b, i++));
    }
    if (j.contains("chow")) {
        const Json& ch = j["chow"];
        ChowConfig cc{ChowRing(parse_unsigned_json(ch.at("n"), "chow n"), parse_integer_json(ch.value("c1", Json(0)), "chow c1")), {}};
        for (const auto& e : ch.value("expressions", Json::array())) cc.expressions.push_back(e.get<std::string>());
        c.chow = std::move(cc);
    }
    assert_point_expectations(c);
    return c;
}

/// The effective configuration with every default spelled out.
inline Json config_json(const RunConfig& c) {
    Json j{{"name", c.name}};
    j["system"] = c.system_source ? *c.system_source : Json(nullptr);
    Json pts = Json::array();
    for (const auto& p : c.points) {
        Json e = Json::object();
        if (p.expect.on_surface) e["on_surface"] = *p.expect.on_surface;
        if (p.expect.periodic) e["periodic"] = *p.expect.periodic;
        if (p.expect.period) e["period"] = *p.expect.period;
        pts.push_back(Json{{"name", p.name}, {"coords", to_json(p.point)}, {"expect", e}});
    }
    j["points"] = pts;
    j["options"] = options_json(c.options);
    j["lattice"] = c.lattice ? c.lattice->source : Json(nullptr);
    j["bbform"] = c.bbform ? c.bbform->source : Json(nullptr);
    Json cases = Json::array();
    for (const auto& b : c.bundles) {
        Json hn = Json::array();
        for (const auto& p : b.hn.pieces()) hn.push_back(Json::array({to_json(p.rank), to_json(p.degree)}));
        cases.push_back(Json{{"name", b.name}, {"n", b.data.n}, {"deg_g", to_json(b.data.deg_g)},
                             {"delta", to_json(b.data.delta)}, {"hn", hn}});
    }
    j["bundle"] = Json{{"cases", cases}};
    j["chow"] = c.chow ? Json{{"n", c.chow->ring.n}, {"c1", to_json(c.chow->ring.c1)}, {"expressions", c.chow->expressions}}
                       : Json(nullptr);
    return j;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
    }
}

} // namespace arithdyn::io
