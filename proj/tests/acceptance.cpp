// One PASS/FAIL line per acceptance criterion, each at its stated tolerance.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "arithdyn/cli/commands.hpp"
#include "sample_configs.hpp"
#include "test_support.hpp"

using namespace arithdyn;
using namespace testsupport;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double time_limit;  // seconds; 0 means none
    std::function<Outcome()> body;
};

std::string fmt(double x, int prec = 6) {
    std::ostringstream s;
    s.precision(prec);
    s << x;
    return s.str();
}

const Rational kEps(1, Integer(1) << 64);

PullbackMap aut(IntMatrix m) { return PullbackMap(std::move(m), 1, true); }

std::vector<std::vector<RationalInterval>> ample(std::size_t n) {
    return {std::vector<RationalInterval>(n, RationalInterval(Rational(1)))};
}

MultiProjPoint pt(std::initializer_list<std::initializer_list<long>> fs) {
    std::vector<MultiProjPoint::Tuple> v;
    for (auto f : fs) {
        MultiProjPoint::Tuple t;
        for (long x : f) t.emplace_back(x);
        v.push_back(t);
    }
    return MultiProjPoint(std::move(v));
}

Outcome wehler_spectral_radius() {
    IntMatrix m = wehler_M(1) * wehler_M(2) * wehler_M(3);
    SpectralData sd = spectral_data(aut(m));
    bool poly = sd.charpoly == ip({1, -17, -17, 1});
    RationalSplit split = split_rational_roots(sd.charpoly);
    bool factored = split.linear.size() == 1 && split.linear[0].first == ip({1, 1}) && split.rest == ip({1, -18, 1});
    RationalInterval lam = refine(sd.radius, Rational(1, 1000000000000L));
    bool width = lam.width() <= Rational(1, 1000000000000L);
    bool around = overlaps_bracket(lam, wehler_lambda_bracket());
    SpectralData par = spectral_data(aut(wehler_M(1) * wehler_M(2)));
    bool parabolic = compare(par.radius, RealAlgebraicNumber::from_rational(Rational(1))) == Ordering::Equal;
    return {poly && factored && width && around && parabolic,
            "charpoly " + to_string(sd.charpoly) + " = " + io::factorization_string(sd.charpoly) + ", lambda1 in [" +
                fmt(to_double(lam.lo()), 15) + ", " + fmt(to_double(lam.hi()), 15) + "] width " + fmt(to_double(lam.width()), 3) +
                ", parabolic lambda1 = " + (parabolic ? std::string("1 exactly") : fmt(par.radius.to_double()))};
}

Outcome condition_ab() {
    IntMatrix g = wehler_gram();
    PullbackMap f = aut(wehler_composite());
    auto a = condition_A(f);
    bool equal = compare(a.lambda_f, a.lambda_f_inv) == Ordering::Equal;
    RationalCone k = fiber_dual_cone(g);
    auto pair = eigenvector_pair(f, k, kEps);
    auto form = TopIntersectionForm::from_gram(to_rational(g));
    Rational tol(1, 100000000);
    Rational qp = form.power(pair.nu_plus.enclose(tol / 64)).magnitude();
    Rational qm = form.power(pair.nu_minus.enclose(tol / 64)).magnitude();
    auto b = condition_B(form, pair, k);
    auto mid = middle_index_ell(form, pair);
    bool pass = a.holds && equal && qp < tol && qm < tol && b.volume.lo() > 0 && b.verdict == Verdict::True && mid.ell == 1 &&
                mid.identity_holds;
    return {pass, "A holds " + std::to_string(a.holds) + ", lambda+ = lambda- " + std::to_string(equal) + ", |q(nu+)| < " +
                      fmt(to_double(qp), 3) + ", |q(nu-)| < " + fmt(to_double(qm), 3) + ", (nu+ + nu-)^2 in [" +
                      fmt(to_double(b.volume.lo())) + ", " + fmt(to_double(b.volume.hi())) + "], ell = " + std::to_string(mid.ell) +
                      ", identity " + std::to_string(mid.identity_holds)};
}

Outcome fujiki_ell() {
    BeauvilleBogomolovForm bb(RatMatrix{{1, 0}, {0, -2}}, 3, 2);
    PullbackMap f = aut(IntMatrix{{3, 4}, {2, 3}});
    bool iso = isometry_check(f, bb);
    auto pair = eigenvector_pair(f, RationalCone({{Rational(1), Rational(1)}, {Rational(1), Rational(-1)}}), kEps);
    auto mid = middle_index_ell(induced_top_form(bb), pair, Rational(1, 10000000000L));
    Rational w(1, 10000000000L);
    auto lp = refine(pair.lambda_plus, w), lm = refine(pair.lambda_minus, w);
    bool overlap = pow(lp, 2).overlaps(pow(lm, 2));
    return {iso && mid.ell == 2 && mid.identity_holds && overlap,
            "isometry " + std::to_string(iso) + ", ell = " + std::to_string(mid.ell) + ", lambda+^2 and lambda-^2 overlap " +
                std::to_string(overlap) + " at width 1e-10"};
}

Outcome functional_equations() {
    auto c = sample_config("wehler_222");
    const System& s = *c.system;
    MultiProjPoint p = named_point(c, "R").point;
    auto pair = eigenvector_pair(pullback_matrix(s), fiber_dual_cone(wehler_gram()), kEps);
    auto r = canonical_pair(s, p, pair, 8);
    Rational scale = std::max(Rational(1), r.hhat.hi());
    Rational tol = scale / 1000;
    bool ok = true;
    std::string detail;
    for (long n : {0L, 1L, -1L, 2L, -2L}) {
        auto res = functional_equation_residual(s, p, r, n);
        bool good = res.contains(Rational(0)) && res.width() <= tol;
        ok = ok && good;
        detail += "n=" + std::to_string(n) + " width " + fmt(to_double(res.width()), 3) + (good ? "" : " (FAIL)") + "; ";
    }
    auto next = tate_limit(s, apply(s, p), weight_enclosure(pair.nu_plus), pair.lambda_plus, 8, Direction::Forward);
    auto ratio = next.enclosure / r.hhat_plus;
    bool eq = ratio.overlaps(refine(pair.lambda_plus, Rational(1, 1000000000000L)));
    return {ok && eq, detail + "h+(fP)/h+(P) in [" + fmt(to_double(ratio.lo()), 10) + ", " + fmt(to_double(ratio.hi()), 10) +
                          "] overlaps lambda1 " + std::to_string(eq)};
}

Outcome nonnegativity_periodicity() {
    auto c = sample_config("wehler_222");
    const System& s = *c.system;
    SweepOptions opt;
    opt.house_bound = 3;
    opt.max_period = 6;
    opt.workers = 4;
    opt.tate_steps = 8;
    opt.pair = eigenvector_pair(pullback_matrix(s), fiber_dual_cone(wehler_gram()), kEps);
    auto entries = sweep_periodic(s, opt);
    std::size_t periodic = 0;
    bool ok = true;
    for (const auto& e : entries) {
        if (e.result.kind != PeriodicityKind::Periodic) continue;
        ++periodic;
        ok = ok && e.canonical && e.canonical->hhat.contains(Rational(0)) &&
             e.canonical->hhat.width() <= 2 * e.canonical->error_bound + e.canonical->plus.value.width() +
                                              e.canonical->minus->value.width();
    }
    auto r = canonical_pair(s, named_point(c, "R").point, *opt.pair, 8);
    bool positive = r.hhat.lo() > 0;
    return {ok && positive && periodic > 0,
            std::to_string(entries.size()) + " surface points, " + std::to_string(periodic) +
                " periodic with h in [0 +- error]; non-periodic R has h >= " + fmt(to_double(r.hhat.lo()))};
}

Outcome alpha_convergence() {
    bool ok = true;
    std::string detail;
    // Upper-bound sanity on every prefix of length >= 3.
    auto sane = [&](const OrbitRecord& rec, double lam) {
        for (std::size_t k = 3; k <= rec.size(); ++k) {
            OrbitRecord pre = rec;
            pre.entries.resize(k);
            auto a = alpha_estimate(pre);
            if (to_double(a.ratio.mid()) > 1.05 * lam || to_double(a.normalized_root.mid()) > 1.05 * lam) return false;
        }
        return true;
    };
    {
        auto rec = iterate_orbit(System(MonomialSystem(IntMatrix{{2, 1}, {1, 1}})), pt({{2, 1}, {3, 1}}), 25, ample(2));
        auto a = alpha_estimate(rec);
        double lam = (3 + std::sqrt(5.0)) / 2, rel = std::fabs(to_double(a.ratio.mid()) - lam) / lam;
        bool s = sane(rec, lam);
        ok = ok && rel < 0.02 && s;
        detail += "monomial ratio " + fmt(to_double(a.ratio.mid()), 10) + " (rel. error " + fmt(rel, 3) + ")";
    }
    {
        OrbitOptions o;
        o.log_prec = 128;
        auto rec = iterate_orbit(System(PowerSystem(2, 2)), pt({{1, 2, 3}}), 10, ample(1), o);
        auto a = alpha_estimate(rec);
        bool two = a.ratio.contains(Rational(2)) && a.normalized_root.contains(Rational(2));
        bool s = sane(rec, 2.0);
        ok = ok && two && s;
        detail += "; power ratio and normalized root contain 2: " + std::to_string(two) + " (widths " +
                  fmt(to_double(a.ratio.width()), 3) + ", " + fmt(to_double(a.normalized_root.width()), 3) + ")";
    }
    return {ok, detail};
}

/// Random factor on P^1 or (P^1)^2: a power map or a positive monomial map.
System random_factor(std::mt19937& rng) {
    if (std::bernoulli_distribution(0.5)(rng)) return PowerSystem(std::uniform_int_distribution<unsigned>(2, 3)(rng), 1);
    std::uniform_int_distribution<long> e(0, 3);
    for (;;) {
        IntMatrix a{{e(rng), e(rng)}, {e(rng), e(rng)}};
        if (sgn(det(a)) != 0 && radius_2x2(a) > 1.5) return MonomialSystem(a);
    }
}

MultiProjPoint random_torus_point(std::mt19937& rng, std::size_t factors) {
    std::uniform_int_distribution<long> d(2, 9);
    std::vector<MultiProjPoint::Tuple> v;
    for (std::size_t i = 0; i < factors; ++i) v.push_back({Integer(d(rng)), Integer(1)});
    return MultiProjPoint(std::move(v));
}

Outcome product_formula() {
    std::mt19937 rng(2024);
    int exact = 0;
    for (int trial = 0; trial < 50; ++trial) {
        System g = random_factor(rng), h = random_factor(rng);
        PullbackMap b = pullback_matrix(System::product(g, h));
        RealAlgebraicNumber rg = spectral_radius(pullback_matrix(g)), rh = spectral_radius(pullback_matrix(h));
        RealAlgebraicNumber mx = compare(rg, rh) == Ordering::Less ? rh : rg;
        exact += compare(spectral_radius(b), mx) == Ordering::Equal;
    }
    int holds = 0;
    double worst = 1e9;
    for (int trial = 0; trial < 20; ++trial) {
        System g = random_factor(rng), h = random_factor(rng);
        System f = System::product(g, h);
        std::size_t k = ambient(g).factors();
        MultiProjPoint p = random_torus_point(rng, ambient(f).factors());
        auto rec = iterate_orbit(f, p, 25, ample(ambient(f).factors()));
        auto base = project_orbit(rec, k, ample(k));
        double margin = to_double(alpha_estimate(rec).ratio.mid()) - (to_double(alpha_estimate(base).ratio.mid()) - 0.05);
        worst = std::min(worst, margin);
        holds += margin >= 0;
    }
    return {exact == 50 && holds == 20, std::to_string(exact) + "/50 block radii exactly max; fibered inequality " +
                                            std::to_string(holds) + "/20 at N=25 (smallest margin " + fmt(worst, 4) + ")"};
}

Outcome bundle_identities() {
    std::mt19937 rng(99);
    int degree = 0, eig = 0, dich = 0, minmax = 0;
    for (int trial = 0; trial < 100; ++trial) {
        unsigned n = std::uniform_int_distribution<unsigned>(2, 5)(rng);
        // random HN type of rank n
        std::vector<HNType::Piece> pieces;
        for (;;) {
            pieces.clear();
            unsigned left = n;
            while (left > 0) {
                unsigned r = std::uniform_int_distribution<unsigned>(1, left)(rng);
                pieces.push_back({Integer(r), Integer(std::uniform_int_distribution<long>(-6, 6)(rng))});
                left -= r;
            }
            std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.slope() > b.slope(); });
            bool strict = true;
            for (std::size_t i = 1; i < pieces.size(); ++i) strict = strict && pieces[i].slope() < pieces[i - 1].slope();
            if (strict) break;
        }
        HNType t(pieces);
        SlopeStats st = slope_stats(t);
        long g = std::uniform_int_distribution<long>(1, 5)(rng), d = std::uniform_int_distribution<long>(1, 4)(rng);
        Rational key = Rational(t.degree()) + Rational(n) * st.mu_min;
        if (sgn(key) != 0) d = g;
        BundleEndoData data(n, Integer(g), rpow(Rational(d), n - 1), st.mu_min);
        degree += degree_identity_check(data, t.degree()).holds;
        auto act = pullback_action(data);
        auto [fgen, egen] = nef_generators(t);
        eig += act.apply(fgen) == FieldElement(Rational(g)) * fgen && act.apply(egen) == act.d * egen &&
               egen == ChowElement::D(t.ring()) - FieldElement(st.mu_min) * ChowElement::F(t.ring());
        auto dr = dichotomy_classify(data, t.degree());
        bool balanced = st.mu_min == -st.mu;
        bool kind_ok = sgn(key) != 0 ? dr.kind == Dichotomy::ForcedBaseEquality
                                     : (dr.kind == Dichotomy::SlopeBalanced || dr.kind == Dichotomy::Both);
        bool sb_ok = (dr.kind == Dichotomy::SlopeBalanced || dr.kind == Dichotomy::Both) == balanced;
        dich += kind_ok && sb_ok && dr.identity_holds;
    }
    for (int trial = 0; trial < 100; ++trial) {
        unsigned n = std::uniform_int_distribution<unsigned>(2, 6)(rng);
        std::vector<HNType::Piece> pieces;
        for (;;) {
            pieces.clear();
            unsigned left = n;
            while (left > 0) {
                unsigned r = std::uniform_int_distribution<unsigned>(1, left)(rng);
                pieces.push_back({Integer(r), Integer(std::uniform_int_distribution<long>(-6, 6)(rng))});
                left -= r;
            }
            std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.slope() > b.slope(); });
            bool strict = pieces.size() >= 2;
            for (std::size_t i = 1; i < pieces.size(); ++i) strict = strict && pieces[i].slope() < pieces[i - 1].slope();
            if (strict) break;
        }
        SlopeStats st = slope_stats(HNType(pieces));
        minmax += st.mu_max > st.mu && st.mu > st.mu_min;
    }
    return {degree == 100 && eig == 100 && dich == 100 && minmax == 100,
            "degree identity " + std::to_string(degree) + "/100, eigenvectors " + std::to_string(eig) + "/100, dichotomy " +
                std::to_string(dich) + "/100, min-max strict " + std::to_string(minmax) + "/100"};
}

Outcome hilbert_and_conjugation() {
    std::mt19937 rng(7);
    int hilbert = 0, conj = 0;
    for (int trial = 0; trial < 20; ++trial) {
        IntMatrix m = random_unimodular(rng, std::uniform_int_distribution<std::size_t>(2, 4)(rng), 8);
        PullbackMap f = aut(m);
        hilbert += compare(spectral_radius(hilbert_extension(f)), spectral_radius(f)) == Ordering::Equal;
    }
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
        IntMatrix m = random_matrix(rng, n, -3, 3);
        if (sgn(det(m)) == 0) {
            --trial;
            continue;
        }
        conj += basis_change_invariance(PullbackMap(m, abs(det(m))), random_unimodular(rng, n, 8));
    }
    return {hilbert == 20 && conj == 50,
            "Hilbert extension " + std::to_string(hilbert) + "/20, basis change " + std::to_string(conj) + "/50"};
}

Outcome determinism() {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("arithdyn_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::string cfg = std::string(ARITHDYN_SOURCE_DIR) + "/configs/wehler_222.json";
    auto run = [&](const std::string& name) {
        std::string cmd = "\"" + std::string(ARITHDYN_CLI_PATH) + "\" --reproducible --config \"" + cfg + "\" ks-verify > \"" +
                          (dir / name).string() + "\"";
        int st = std::system(cmd.c_str());
        std::ifstream f(dir / name);
        std::stringstream s;
        s << f.rdbuf();
        return std::pair{st, s.str()};
    };
    auto [sa, a] = run("a.json");
    auto [sb, b] = run("b.json");
    fs::remove_all(dir);
    auto c = sample_config("wehler_222");
    std::string x = cli::envelope("ks-verify", c.name, cli::cmd_ks_verify(c), std::nullopt).dump(2);
    std::string y = cli::envelope("ks-verify", c.name, cli::cmd_ks_verify(c), std::nullopt).dump(2);
    bool ok = sa == 0 && sb == 0 && !a.empty() && a == b && x == y;
    return {ok, "two CLI runs: " + std::to_string(a.size()) + " bytes, identical " + std::to_string(a == b) +
                    "; in-process identical " + std::to_string(x == y)};
}

} // namespace

int main() {
    std::vector<Criterion> criteria{
        {1, "Wehler spectral radius", 1.0, wehler_spectral_radius},
        {2, "Condition A/B certification", 5.0, condition_ab},
        {3, "Fujiki middle index", 0, fujiki_ell},
        {4, "Canonical-height functional equations", 0, functional_equations},
        {5, "Nonnegativity and periodicity", 0, nonnegativity_periodicity},
        {6, "Arithmetic-degree convergence", 0, alpha_convergence},
        {7, "Product formula and fibered inequality", 0, product_formula},
        {8, "Projective-bundle identities", 10.0, bundle_identities},
        {9, "Hilbert extension and conjugation invariance", 0, hilbert_and_conjugation},
        {10, "Determinism", 0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_time = c.time_limit == 0 || secs < c.time_limit;
        bool pass = o.pass && in_time;
        failed += !pass;
        std::cout << (pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.title << " (" << fmt(secs, 3) << " s"
                  << (c.time_limit > 0 ? ", limit " + fmt(c.time_limit) + " s" : "") << "): " << o.detail << '\n';
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
    return failed;
}
