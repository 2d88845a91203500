#include <gtest/gtest.h>

#include <random>

#include "sample_configs.hpp"
#include "test_support.hpp"

using namespace arithdyn;
using namespace testsupport;

namespace {

using Tuple = MultiProjPoint::Tuple;

Tuple tup(std::initializer_list<long> c) {
    Tuple t;
    for (long x : c) t.emplace_back(x);
    return t;
}

MultiProjPoint pt(std::initializer_list<std::initializer_list<long>> fs) {
    std::vector<Tuple> v;
    for (auto f : fs) v.push_back(tup(f));
    return MultiProjPoint(std::move(v));
}

const std::vector<std::vector<RationalInterval>> kOne{{RationalInterval(Rational(1))}};

std::vector<std::vector<RationalInterval>> ample(std::size_t n) {
    return {std::vector<RationalInterval>(n, RationalInterval(Rational(1)))};
}

/// z^2 - 5 z w + 6 w^2 in the third factor, times v1^2 v2^2.
WehlerForm residual_quadratic_form() {
    WehlerForm::Cube c{};
    c[2][2][0] = 1;
    c[2][2][1] = -5;
    c[2][2][2] = 6;
    return WehlerForm(c);
}

const WehlerSystem& wehler() {
    static const io::RunConfig c = sample_config("wehler_222");
    return *c.system->as<WehlerSystem>();
}

/// On-surface points reached from the sample points by short random words.
std::vector<MultiProjPoint> surface_points(std::size_t count, unsigned seed) {
    static const io::RunConfig c = sample_config("wehler_222");
    const auto& w = wehler();
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> start(0, c.points.size() - 1), letter(0, 2), len(0, 4);
    std::vector<MultiProjPoint> out;
    while (out.size() < count) {
        MultiProjPoint p = c.points[start(rng)].point;
        try {
            for (std::size_t k = len(rng); k > 0; --k) p = w.form.involution(letter(rng), p);
        } catch (const DegenerateFiber&) {
            continue;
        }
        out.push_back(p);
    }
    return out;
}

/// Natural log of a positive integer of any size.
double ilog(const Integer& x) {
    long e;
    double m = mpz_get_d_2exp(&e, x.get_mpz_t());
    return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

} // namespace

TEST(Apply, MonomialSubstitution) {
    System f = MonomialSystem(IntMatrix{{2, 1}, {1, 1}});
    EXPECT_EQ(apply(f, pt({{2, 1}, {3, 1}})), pt({{12, 1}, {6, 1}}));
    EXPECT_THROW(apply(f, pt({{0, 1}, {3, 1}})), DomainError);
}

TEST(Apply, PowerMap) {
    System f = PowerSystem(2, 2);
    EXPECT_EQ(apply(f, pt({{1, 2, 3}})), pt({{1, 4, 9}}));
}

TEST(Apply, WehlerInvolutionOnAResidualQuadratic) {
    // Fiber of sigma_3 through ([0:1],[0:1],[2:1]) is z^2 - 5z + 6; the other root is 3.
    WehlerSystem w(residual_quadratic_form(), {3});
    MultiProjPoint p = pt({{0, 1}, {0, 1}, {2, 1}});
    ASSERT_TRUE(on_surface_check(w, p));
    EXPECT_EQ(apply(System(w), p), pt({{0, 1}, {0, 1}, {3, 1}}));
    EXPECT_THROW(apply(System(w), pt({{0, 1}, {0, 1}, {1, 1}})), DomainError);
    // Over v1 = 0 the whole fiber vanishes.
    EXPECT_THROW(apply(System(w), pt({{1, 0}, {0, 1}, {2, 1}})), DegenerateFiber);
}

TEST(VietaOtherRoot, Examples) {
    EXPECT_EQ(vieta_other_root(Integer(1), Integer(-5), Integer(6), tup({2, 1})), tup({3, 1}));
    EXPECT_EQ(vieta_other_root(Integer(1), Integer(-4), Integer(4), tup({2, 1})), tup({2, 1}));
    EXPECT_THROW(vieta_other_root(Integer(1), Integer(0), Integer(-2), tup({0, 1})), PreconditionError);
    EXPECT_THROW(vieta_other_root(Integer(0), Integer(0), Integer(0), tup({0, 1})), DegenerateFiber);
}

TEST(VietaOtherRoot, SumFormulaFallback) {
    // C = 0 and u = 0: the product formula gives (0, 0); the sum formula gives [-B : A].
    EXPECT_EQ(vieta_other_root(Integer(2), Integer(-6), Integer(0), tup({0, 1})), tup({3, 1}));
    // Root at infinity of a linear form: A = 0.
    EXPECT_EQ(vieta_other_root(Integer(0), Integer(1), Integer(-3), tup({1, 0})), tup({3, 1}));
}

TEST(VietaOtherRoot, RandomRationalRootPairs) {
    // Oracle: build the quadratic from two chosen roots.
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> d(-20, 20), e(1, 9);
    for (int trial = 0; trial < 200; ++trial) {
        Tuple r1 = tup({d(rng), e(rng)}), r2 = tup({d(rng), e(rng)});
        MultiProjPoint n1({r1}), n2({r2});
        const auto &a = n1.factor(0), &b = n2.factor(0);
        // (v1 z - u1)(v2 z - u2)
        Integer A = a[1] * b[1], B = -(a[1] * b[0] + a[0] * b[1]), C = a[0] * b[0];
        EXPECT_EQ(vieta_other_root(A, B, C, a), b);
        EXPECT_EQ(vieta_other_root(A, B, C, b), a);
    }
}

TEST(PullbackMatrix, WehlerWords) {
    EXPECT_EQ(pullback_matrix(System(wehler())).matrix(), wehler_composite());
    for (int i = 1; i <= 3; ++i) {
        IntMatrix m = wehler_M(i);
        EXPECT_EQ(m * m, IntMatrix::identity(3));
        EXPECT_EQ(m.transpose() * wehler_gram() * m, wehler_gram());
    }
    auto sd = spectral_data(pullback_matrix(System(wehler())));
    EXPECT_TRUE(overlaps_bracket(refine(sd.radius, Rational(1, 1000000000000L)), wehler_lambda_bracket()));

    WehlerSystem parabolic(wehler().form, {1, 2});
    PullbackMap f = pullback_matrix(System(parabolic));
    EXPECT_TRUE(f.is_automorphism());
    // det(tI - M) = (t - 1)^3 = -(1 - t)(t - 1)^2
    for (long t : {-3L, 0L, 2L, 5L})
        EXPECT_EQ(charpoly_at(f.matrix(), Rational(t)), Rational(t - 1) * Rational(t - 1) * Rational(t - 1));
    EXPECT_EQ(compare(spectral_data(f).radius, RealAlgebraicNumber::from_rational(Rational(1))), Ordering::Equal);
}

TEST(PullbackMatrix, PowerMonomialProduct) {
    PullbackMap p = pullback_matrix(System(PowerSystem(3, 2)));
    EXPECT_EQ(p.matrix(), (IntMatrix{{3}}));
    EXPECT_EQ(p.degree(), Integer(9));
    PullbackMap m = pullback_matrix(System(MonomialSystem(IntMatrix{{2, 1}, {1, 3}})));
    EXPECT_EQ(m.degree(), Integer(5));
    EXPECT_FALSE(m.is_automorphism());
    System prod = System::product(PowerSystem(3, 1), MonomialSystem(IntMatrix{{2, 1}, {1, 1}}));
    PullbackMap b = pullback_matrix(prod);
    EXPECT_EQ(b.matrix(), (IntMatrix{{3, 0, 0}, {0, 2, 1}, {0, 1, 1}}));
    EXPECT_EQ(b.matrix(), block_product(pullback_matrix(System(PowerSystem(3, 1))),
                                        pullback_matrix(System(MonomialSystem(IntMatrix{{2, 1}, {1, 1}}))))
                              .matrix());
}

TEST(IterateOrbit, PowerHousesAreExactPowers) {
    OrbitOptions opt;
    opt.log_prec = 128;
    for (Representation r : {Representation::Auto, Representation::Exact}) {
        opt.representation = r;
        auto rec = iterate_orbit(System(PowerSystem(2, 2)), pt({{1, 2, 3}}), 3, kOne, opt);
        ASSERT_EQ(rec.size(), 4u);
        std::vector<long> expect{3, 9, 81, 6561};
        for (std::size_t n = 0; n < 4; ++n) {
            EXPECT_EQ(rec.entries[n].n, static_cast<long>(n));
            EXPECT_EQ(*exact_houses(rec.entries[n]), std::vector<Integer>{Integer(expect[n])});
            double h = std::ldexp(std::log(3.0), static_cast<int>(n));
            EXPECT_NEAR(to_double(rec.entries[n].heights[0].mid()), h, 1e-12 * h);
        }
    }
}

TEST(IterateOrbit, MonomialSubstitution) {
    OrbitOptions opt;
    opt.representation = Representation::Exact;
    auto rec = iterate_orbit(System(MonomialSystem(IntMatrix{{2, 1}, {1, 1}})), pt({{2, 1}, {3, 1}}), 2, ample(2), opt);
    ASSERT_EQ(rec.size(), 3u);
    EXPECT_EQ(std::get<MultiProjPoint>(rec.entries[1].point), pt({{12, 1}, {6, 1}}));
    EXPECT_EQ(std::get<MultiProjPoint>(rec.entries[2].point), pt({{864, 1}, {72, 1}}));
}

TEST(IterateOrbit, ResourceLimitCarriesThePartialRecord) {
    OrbitOptions opt;
    opt.representation = Representation::Exact;
    opt.cap_bits = 200;
    try {
        iterate_orbit(System(PowerSystem(2, 1)), pt({{2, 3}}), 20, kOne, opt);
        FAIL() << "expected a resource limit";
    } catch (const OrbitTruncated& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ResourceLimit);
        EXPECT_GE(e.partial().size(), 2u);
        EXPECT_LT(e.partial().size(), 21u);
    }
}

TEST(IterateOrbit, WehlerBackwardUsesTheReversedWord) {
    const auto& w = wehler();
    MultiProjPoint r = named_point(sample_config("wehler_222"), "R").point;
    OrbitOptions opt;
    opt.representation = Representation::Exact;
    auto back = iterate_orbit(System(w), r, -3, ample(3), opt);
    ASSERT_EQ(back.size(), 4u);
    EXPECT_EQ(back.entries[3].n, -3);
    MultiProjPoint q = std::get<MultiProjPoint>(back.entries[3].point);
    for (int k = 0; k < 3; ++k) q = apply(System(w), q);
    EXPECT_EQ(q, r);
    EXPECT_THROW(iterate_orbit(System(w), pt({{1, 1}, {1, 1}, {1, 1}}), 2, ample(3)), DomainError);
}

TEST(OnSurface, Examples) {
    const auto& w = wehler();
    auto c = sample_config("wehler_222");
    for (const auto& p : c.points) EXPECT_TRUE(on_surface_check(w, p.point)) << p.name;
    std::mt19937 rng(8);
    std::uniform_int_distribution<long> d(1, 1000);
    int off = 0;
    for (int trial = 0; trial < 50; ++trial)
        off += !on_surface_check(w, pt({{d(rng), d(rng)}, {d(rng), d(rng)}, {d(rng), d(rng)}}));
    EXPECT_EQ(off, 50);
    EXPECT_THROW(on_surface_check(w, pt({{0, 0}, {1, 1}, {1, 1}})), InvalidInput);
}

TEST(Properties, InvolutionsSquareToIdentityOnTheSurface) {
    const auto& w = wehler();
    auto pts = surface_points(100, 21);
    std::size_t checked = 0;
    for (const auto& p : pts) {
        ASSERT_TRUE(on_surface_check(w, p));
        for (std::size_t i = 0; i < 3; ++i) {
            try {
                MultiProjPoint q = w.form.involution(i, p);
                EXPECT_TRUE(on_surface_check(w, q));
                EXPECT_EQ(w.form.involution(i, q), p);
                ++checked;
            } catch (const DegenerateFiber&) {
            }
        }
    }
    EXPECT_GE(checked, 250u);
}

TEST(Properties, InverseWordReversesTheOrbit) {
    const auto& w = wehler();
    System f(w), g = inverse_system(System(w));
    for (const auto& p : surface_points(30, 22)) {
        try {
            EXPECT_EQ(apply(g, apply(f, p)), p);
            EXPECT_EQ(apply(f, apply(g, p)), p);
        } catch (const DegenerateFiber&) {
        }
    }
    System m = MonomialSystem(IntMatrix{{2, 1}, {1, 1}});
    EXPECT_EQ(apply(inverse_system(m), apply(m, pt({{2, 5}, {-3, 7}}))), pt({{2, 5}, {-3, 7}}));
}

TEST(Properties, PowerHeightIsExactlyMultiplicative) {
    std::mt19937 rng(9);
    std::uniform_int_distribution<long> d(-200, 200);
    for (unsigned deg : {2u, 3u, 5u})
        for (int trial = 0; trial < 20; ++trial) {
            Tuple t{d(rng), d(rng), d(rng)};
            if (t[0] == 0 && t[1] == 0 && t[2] == 0) continue;
            MultiProjPoint p({t});
            Integer h = factor_heights(p).houses[0];
            EXPECT_EQ(factor_heights(apply(System(PowerSystem(deg, 2)), p)).houses[0], ipow(h, deg));
        }
}

TEST(Properties, MonomialHeightsBoundedByAbsoluteMatrixAction) {
    // log H(f^n P) <= |A|^n log H(P) + slack n, coordinate-wise.
    std::mt19937 rng(10);
    std::uniform_int_distribution<long> d(1, 30);
    const double slack = 1e-9;
    IntMatrix a{{2, 1}, {1, 1}}, b{{1, -2}, {1, -1}};
    for (const IntMatrix& m : {a, b}) {
        System f = MonomialSystem(m);
        for (int trial = 0; trial < 10; ++trial) {
            MultiProjPoint p = pt({{d(rng), d(rng)}, {-d(rng), d(rng)}});
            std::vector<double> h0;
            for (const auto& x : factor_heights(p).houses) h0.push_back(ilog(x));
            std::vector<double> bound = h0;
            MultiProjPoint q = p;
            for (int n = 1; n <= 6; ++n) {
                q = apply(f, q);
                std::vector<double> next(2, 0.0);
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t j = 0; j < 2; ++j) next[i] += std::fabs(m(i, j).get_d()) * bound[j];
                bound = next;
                auto hs = factor_heights(q).houses;
                for (std::size_t i = 0; i < 2; ++i)
                    EXPECT_LE(ilog(hs[i]), bound[i] + slack * n + 1e-9 * bound[i]);
            }
        }
    }
}

TEST(Properties, ProductOrbitProjectsToTheBaseOrbit) {
    System g = PowerSystem(3, 1);
    System f = System::product(g, MonomialSystem(IntMatrix{{2, 1}, {1, 1}}));
    OrbitOptions opt;
    opt.representation = Representation::Exact;
    opt.log_prec = 128;
    MultiProjPoint p = pt({{2, 1}, {2, 1}, {3, 1}});
    auto full = iterate_orbit(f, p, 5, ample(3), opt);
    auto proj = project_orbit(full, 1, kOne);
    auto base = iterate_orbit(g, p.project({0}), 5, kOne, opt);
    ASSERT_EQ(proj.size(), base.size());
    for (std::size_t n = 0; n < base.size(); ++n) {
        EXPECT_EQ(std::get<MultiProjPoint>(proj.entries[n].point), std::get<MultiProjPoint>(base.entries[n].point));
        EXPECT_TRUE(proj.entries[n].heights[0].overlaps(base.entries[n].heights[0]));
    }
}

TEST(DualRoute, ExactAndCompactWehlerOrbitsAgree) {
    const auto& w = wehler();
    MultiProjPoint r = named_point(sample_config("wehler_222"), "R").point;
    OrbitOptions ex, cp;
    ex.representation = Representation::Exact;
    cp.representation = Representation::Compact;
    ex.log_prec = cp.log_prec = 128;
    for (long N : {4L, -4L}) {
        auto a = iterate_orbit(System(w), r, N, ample(3), ex);
        auto b = iterate_orbit(System(w), r, N, ample(3), cp);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t n = 0; n < a.size(); ++n) {
            EXPECT_TRUE(std::holds_alternative<LocalPoint>(b.entries[n].point) || n == 0);
            for (std::size_t i = 0; i < 3; ++i) {
                EXPECT_TRUE(a.entries[n].log_houses[i].overlaps(b.entries[n].log_houses[i])) << N << " " << n << " " << i;
                EXPECT_LT(b.entries[n].log_houses[i].width(), Rational(1, 1000000));
            }
        }
    }
}

TEST(DualRoute, FactoredAndExactMonomialOrbitsAgree) {
    System f = MonomialSystem(IntMatrix{{2, 1}, {1, 1}});
    OrbitOptions ex, au;
    ex.representation = Representation::Exact;
    au.representation = Representation::Auto;
    auto a = iterate_orbit(f, pt({{2, 1}, {3, 1}}), 8, ample(2), ex);
    auto b = iterate_orbit(f, pt({{2, 1}, {3, 1}}), 8, ample(2), au);
    for (std::size_t n = 0; n < a.size(); ++n) {
        EXPECT_TRUE(std::holds_alternative<FactoredPoint>(b.entries[n].point));
        EXPECT_EQ(*exact_houses(a.entries[n], 1 << 20), *exact_houses(b.entries[n], 1 << 20));
        EXPECT_TRUE(a.entries[n].heights[0].overlaps(b.entries[n].heights[0]));
    }
}
