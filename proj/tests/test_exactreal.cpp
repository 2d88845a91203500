#include <gtest/gtest.h>

#include <random>

#include "arithdyn/exactreal.hpp"

using namespace arithdyn;

namespace {

// Test-local oracles, written without the library's Sturm or sign code.

Rational horner(const std::vector<long>& c, const Rational& x) {
    Rational acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

// Plain bisection on a bracket with a sign change.
std::pair<Rational, Rational> oracle_bisect(const std::vector<long>& c, Rational lo, Rational hi, const Rational& width) {
    int slo = sgn(horner(c, lo));
    while (hi - lo > width) {
        Rational m = (lo + hi) / 2;
        int s = sgn(horner(c, m));
        if (s == 0) return {m, m};
        if (s == slo)
            lo = m;
        else
            hi = m;
    }
    return {lo, hi};
}

// floor(sqrt(n) * 10^k) / 10^k and the next step up bracket sqrt(n).
std::pair<Rational, Rational> oracle_sqrt(long n, unsigned k) {
    Integer scale = ipow(Integer(10), k);
    Integer r;
    Integer big = Integer(n) * scale * scale;
    mpz_sqrt(r.get_mpz_t(), big.get_mpz_t());
    return {Rational(r) / Rational(scale), Rational(r + 1) / Rational(scale)};
}

IntPolynomial ip(std::initializer_list<long> c) {
    std::vector<Integer> v;
    for (long x : c) v.emplace_back(x);
    return IntPolynomial(std::move(v));
}

} // namespace

TEST(Polynomial, ArithmeticAndGcd) {
    auto p = ip({1, -17, -17, 1}).compose(ip({0, 1}));
    EXPECT_EQ(p.degree(), 3);
    auto q = ip({1, 1}) * ip({1, -18, 1});
    EXPECT_EQ(q, ip({1, -17, -17, 1}));
    EXPECT_EQ(gcd(q, ip({1, 1}) * ip({-2, 1})), ip({1, 1}));
    EXPECT_EQ(squarefree_part(ip({-1, 1}) * ip({-1, 1}) * ip({2, 1})), ip({-2, 1, 1}));
    EXPECT_EQ(ip({-2, 0, 1}).compose_power(2), ip({-2, 0, 0, 0, 1}));
    EXPECT_EQ(ip({1, 2, 3}).reflect(), ip({1, -2, 3}));
}

TEST(Polynomial, SignAtMatchesDirectEvaluation) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> coef(-20, 20);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<long> c(5);
        for (auto& x : c) x = coef(rng);
        IntPolynomial p(std::vector<Integer>(c.begin(), c.end()));
        Rational x(coef(rng), 1 + std::abs(coef(rng)));
        x.canonicalize();
        EXPECT_EQ(sign_at(p, x), sgn(horner(c, x)));
    }
}

TEST(IsolateRealRoots, Linear) {
    auto r = isolate_real_roots(ip({-1, 1}));
    ASSERT_EQ(r.size(), 1u);
    EXPECT_TRUE(r[0].is_rational());
    EXPECT_EQ(r[0].interval().lo(), 1);
    EXPECT_EQ(r[0].interval().hi(), 1);
}

TEST(IsolateRealRoots, GoldenQuadratic) {
    auto r = isolate_real_roots(ip({1, -3, 1}));
    ASSERT_EQ(r.size(), 2u);
    auto iv = refine(r[1], Rational(1, 1000));
    auto [lo, hi] = oracle_bisect({1, -3, 1}, Rational(2), Rational(3), Rational(1, 1000));
    EXPECT_TRUE(iv.overlaps(RationalInterval(lo, hi)));
    EXPECT_GE(iv.lo(), Rational(261, 100));
    EXPECT_LE(iv.hi(), Rational(262, 100));
}

TEST(IsolateRealRoots, WehlerCubic) {
    auto r = isolate_real_roots(ip({1, -17, -17, 1}));
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(compare(r[0], Rational(-1)), Ordering::Equal);
    // 9 +- 4 sqrt5 = 9 +- sqrt80
    auto [s_lo, s_hi] = oracle_sqrt(80, 15);
    auto small = refine(r[1], Rational(1, 1000000));
    auto large = refine(r[2], Rational(1, 1000000));
    EXPECT_TRUE(small.overlaps(RationalInterval(9 - s_hi, 9 - s_lo)));
    EXPECT_TRUE(large.overlaps(RationalInterval(9 + s_lo, 9 + s_hi)));
    auto top = refine(r[2], Rational(1, 1000));
    EXPECT_GE(top.lo(), Rational(1794, 100));
    EXPECT_LE(top.hi(), Rational(1795, 100));
}

TEST(IsolateRealRoots, ZeroPolynomialRejected) { EXPECT_THROW(isolate_real_roots(IntPolynomial{}), InvalidInput); }

TEST(IsolateRealRoots, RepeatedAndRationalRoots) {
    auto p = ip({-1, 1}) * ip({-1, 1}) * ip({0, 1}) * ip({-2, 0, 1});
    auto r = isolate_real_roots(p);
    ASSERT_EQ(r.size(), 4u);
    EXPECT_EQ(compare(r[1], Rational(0)), Ordering::Equal);
    EXPECT_EQ(compare(r[2], Rational(1)), Ordering::Equal);
}

TEST(Refine, Examples) {
    RealAlgebraicNumber one(ip({-1, 1}), RationalInterval(Rational(0), Rational(2)));
    auto iv = refine(one, Rational(1, 10));
    EXPECT_LE(iv.width(), Rational(1, 10));
    EXPECT_TRUE(iv.contains(Rational(1)));

    RealAlgebraicNumber sqrt2(ip({-2, 0, 1}), RationalInterval(Rational(1), Rational(2)));
    Rational eps(1, 1000000);
    auto s = refine(sqrt2, eps);
    EXPECT_LE(s.width(), eps);
    EXPECT_TRUE(sqrt2.interval().contains(s));
    auto [lo, hi] = oracle_bisect({-2, 0, 1}, Rational(1), Rational(2), eps);
    EXPECT_TRUE(s.overlaps(RationalInterval(lo, hi)));

    RealAlgebraicNumber w(ip({1, -18, 1}), RationalInterval(Rational(17), Rational(18)));
    Rational e12 = Rational(1) / Rational(ipow(Integer(10), 12));
    auto wi = refine(w, e12);
    EXPECT_LE(wi.width(), e12);
    auto [q_lo, q_hi] = oracle_sqrt(80, 20);
    EXPECT_TRUE(wi.overlaps(RationalInterval(9 + q_lo, 9 + q_hi)));
}

TEST(Refine, RejectsNonIsolatingInterval) {
    EXPECT_THROW(RealAlgebraicNumber(ip({-2, 0, 1}), RationalInterval(Rational(-2), Rational(2))), InvalidInput);
    EXPECT_THROW(RealAlgebraicNumber(ip({-2, 0, 1}), RationalInterval(Rational(2), Rational(3))), InvalidInput);
}

TEST(Compare, Examples) {
    auto one = RealAlgebraicNumber::from_rational(Rational(1));
    EXPECT_EQ(compare(one, one), Ordering::Equal);
    auto golden = isolate_real_roots(ip({1, -3, 1}))[1];
    EXPECT_EQ(compare(golden, Rational(2)), Ordering::Greater);
    auto a = isolate_real_roots(ip({1, -18, 1}))[1];
    auto b = isolate_real_roots(ip({1, -18, 1}))[1];
    EXPECT_EQ(compare(a, b), Ordering::Equal);
    // Same number, different defining polynomials.
    auto c = isolate_real_roots(ip({1, -17, -17, 1}))[2];
    EXPECT_EQ(compare(a, c), Ordering::Equal);
    EXPECT_EQ(compare(c, golden), Ordering::Greater);
    EXPECT_EQ(compare(golden, c), Ordering::Less);
}

TEST(Compare, CloseButDistinct) {
    // sqrt2 against a rational approximation that shares many digits.
    auto s = isolate_real_roots(ip({-2, 0, 1}))[1];
    Rational approx(Integer("1414213562373095"), Integer("1000000000000000"));
    EXPECT_EQ(compare(s, approx), Ordering::Greater);
}

TEST(KthRoot, Examples) {
    auto two = kth_root(Rational(4), 2);
    EXPECT_TRUE(two.is_rational());
    EXPECT_EQ(compare(two, Rational(2)), Ordering::Equal);
    EXPECT_EQ(compare(kth_root(Rational(8), 3), Rational(2)), Ordering::Equal);
    EXPECT_THROW(kth_root(Rational(0), 2), DomainError);
    EXPECT_THROW(kth_root(Rational(-3), 3), DomainError);
}

TEST(KthRoot, OfAlgebraic) {
    auto lam = isolate_real_roots(ip({1, -18, 1}))[1];  // 9+4sqrt5 = (2+sqrt5)^2
    auto r = kth_root(lam, 2);
    auto phi3 = isolate_real_roots(ip({-1, -4, 1}))[1];  // 2+sqrt5
    EXPECT_EQ(compare(r, phi3), Ordering::Equal);
    auto small = isolate_real_roots(ip({1, -18, 1}))[0];  // 9-4sqrt5 = (sqrt5-2)^2
    auto rs = kth_root(small, 2);
    auto target = isolate_real_roots(ip({-1, 4, 1}))[1];  // sqrt5-2
    EXPECT_EQ(compare(rs, target), Ordering::Equal);
    auto neg = isolate_real_roots(ip({1, -17, -17, 1}))[0];
    EXPECT_THROW(kth_root(neg, 2), DomainError);
}

TEST(SignAtAlgebraic, ExactZero) {
    auto s = isolate_real_roots(ip({-2, 0, 1}))[1];
    EXPECT_EQ(sign_at(ip({-4, 0, 0, 0, 1}), s), 0);
    EXPECT_EQ(sign_at(ip({-3, 0, 1}), s), -1);
    EXPECT_EQ(sign_at(ip({0, 1}), s), 1);
}

TEST(NumberField, ArithmeticInQSqrt5) {
    auto phi = isolate_real_roots(ip({-1, -1, 1}))[1];
    auto k = std::make_shared<NumberField>(phi);
    auto a = FieldElement::generator(k);
    EXPECT_TRUE((a * a - a - FieldElement(1)).is_zero());
    auto inv = a.inverse();
    EXPECT_TRUE((a * inv - FieldElement(1)).is_zero());
    EXPECT_EQ((a - FieldElement(Rational(3, 2))).sign(), 1);
    auto iv = (a + a).enclose(Rational(1, 1000000));
    auto [lo, hi] = oracle_sqrt(5, 10);
    EXPECT_TRUE(iv.overlaps(RationalInterval(1 + lo, 1 + hi)));
}

TEST(NumberField, ReducibleModulusSplits) {
    // m = (t+1)(t^2-18t+1); alpha the largest root. alpha+1 is a zero divisor
    // of Q[t]/(m) but invertible in Q(alpha).
    auto lam = isolate_real_roots(ip({1, -17, -17, 1}))[2];
    auto k = std::make_shared<NumberField>(lam);
    auto a = FieldElement::generator(k);
    auto x = a + FieldElement(1);
    EXPECT_FALSE(x.is_zero());
    auto inv = x.inverse();
    EXPECT_TRUE((x * inv - FieldElement(1)).is_zero());
    EXPECT_EQ(inv.field()->modulus.degree(), 2);
}

TEST(Mpfr, LogEnclosure) {
    auto l = log_enclosure(Integer(1000), 128);
    EXPECT_LT(l.lo(), from_double(6.907755278982137 + 1e-12));
    EXPECT_GT(l.hi(), from_double(6.907755278982137 - 1e-12));
    EXPECT_LT(l.width(), Rational(1, 1000000000));
}

// Enclosure soundness over random expression trees: each enclosure contains
// the exact value, checked against a much tighter enclosure.
TEST(Property, EnclosureSoundness) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> pick(0, 4);
    std::vector<RealAlgebraicNumber> leaves = {
        isolate_real_roots(ip({-2, 0, 1}))[1], isolate_real_roots(ip({1, -3, 1}))[1],
        RealAlgebraicNumber::from_rational(Rational(3, 7)), isolate_real_roots(ip({1, -18, 1}))[1]};
    std::uniform_int_distribution<std::size_t> leaf(0, leaves.size() - 1);
    for (int trial = 0; trial < 40; ++trial) {
        RealExpr e = RealExpr::leaf(leaves[leaf(rng)]);
        for (int depth = 0; depth < 4; ++depth) {
            RealExpr o = RealExpr::leaf(leaves[leaf(rng)]);
            switch (pick(rng)) {
            case 0: e = e + o; break;
            case 1: e = e * o; break;
            case 2: e = pow(e, 2); break;
            case 3: e = root(e * e + o * o, 3); break;
            default: e = e - o; break;
            }
        }
        RationalInterval fine = e.enclose(80);
        for (unsigned level : {4u, 10u, 20u, 40u}) {
            RationalInterval coarse = e.enclose(level);
            EXPECT_TRUE(coarse.overlaps(fine)) << "level " << level;
            EXPECT_LE(coarse.lo(), fine.hi());
        }
    }
}

// Root-isolation completeness: root count equals the Sturm count.
TEST(Property, IsolationCompleteness) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> coef(-9, 9);
    std::uniform_int_distribution<int> deg(1, 7);
    for (int trial = 0; trial < 150; ++trial) {
        int d = deg(rng);
        std::vector<Integer> c;
        for (int i = 0; i <= d; ++i) c.emplace_back(coef(rng));
        if (c.back() == 0) c.back() = 1;
        IntPolynomial p(c);
        auto roots = isolate_real_roots(p);
        SturmSequence s(squarefree_part(p));
        EXPECT_EQ(static_cast<int>(roots.size()), s.count_all_roots());
        for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
            EXPECT_LT(roots[i].interval().hi(), roots[i + 1].interval().lo());
            EXPECT_EQ(compare(roots[i], roots[i + 1]), Ordering::Less);
        }
        for (const auto& r : roots) EXPECT_EQ(sign_at(p, r), 0);
    }
}

// Compare is a trichotomy consistent with refinement.
TEST(Property, CompareConsistentWithRefinement) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> coef(-6, 6);
    std::vector<RealAlgebraicNumber> pool;
    for (int i = 0; i < 12; ++i) {
        IntPolynomial p({Integer(coef(rng)), Integer(coef(rng)), Integer(1)});
        for (auto& r : isolate_real_roots(p)) pool.push_back(r);
    }
    for (const auto& x : pool)
        for (const auto& y : pool) {
            Ordering o = compare(x, y);
            Ordering back = compare(y, x);
            if (o == Ordering::Equal)
                EXPECT_EQ(back, Ordering::Equal);
            else
                EXPECT_NE(back, o);
            if (o == Ordering::Less) {
                auto xi = refine(x, Rational(1, 1 << 20)), yi = refine(y, Rational(1, 1 << 20));
                EXPECT_LE(xi.lo(), yi.hi());
            }
        }
}
