#include <functional>

#include <gtest/gtest.h>

#include "hippoc/error.hpp"
#include "hippoc/randomness_tests.hpp"
#include "hippoc/verify.hpp"
#include "oracles.hpp"

using namespace hippoc;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

// P(|avg_n - p| >= k sigma / sqrt(n)) with the event squared, in rationals.
mpq_class chebyshev_tail(unsigned long n, const mpq_class& p, unsigned long k) {
    const mpq_class threshold = mpq_class(k * k) * p * (1 - p) / mpq_class(n);
    mpq_class tail = 0;
    for (unsigned long c = 0; c <= n; ++c) {
        const mpq_class gap = oracle::q(static_cast<long>(c), static_cast<long>(n)) - p;
        if (gap * gap >= threshold) tail += oracle::binomial_pmf(n, c, p);
    }
    return tail;
}

}  // namespace

TEST(Moments, Examples) {
    EXPECT_EQ(fourth_central_moment(Rational(1, 2)), Rational(1, 16));
    EXPECT_EQ(moment_s4(1, Rational(1, 2)).formula_value, Rational(1, 16));
    EXPECT_EQ(moment_s4(2, Rational(1, 2)).formula_value, Rational(1, 2));
    EXPECT_EQ(brute_force_s4(2, Rational(1, 2)), Rational(1, 2));
    EXPECT_EQ(brute_force_s4(1, Rational(0)), Rational(0));
    EXPECT_EQ(brute_force_s4(3, Rational(1, 3)), moment_s4(3, Rational(1, 3)).formula_value);
    EXPECT_EQ(code_of([] { brute_force_s4(15, Rational(1, 2)); }), ErrorCode::TooLarge);
}

TEST(Moments, FormulaBruteForceAndCountSumAgree) {
    for (const Rational p : {Rational(1, 2), Rational(1, 3), Rational(3, 10), Rational(9, 10)}) {
        for (std::uint64_t n = 1; n <= 12; ++n) {
            const MomentReport r = moment_s4(n, p);
            ASSERT_TRUE(r.brute_force_value.has_value());
            EXPECT_EQ(r.formula_value, *r.brute_force_value);
            EXPECT_EQ(r.formula_value.raw(), oracle::s4_by_counts(n, p.raw()));
            EXPECT_TRUE(*r.satisfied);
        }
    }
    // Beyond the brute-force range, the count sum still matches.
    EXPECT_EQ(moment_s4(200, Rational(2, 7)).formula_value.raw(), oracle::s4_by_counts(200, oracle::q(2, 7)));
}

TEST(Moments, KpAtMostHalf) {
    for (long k = 0; k <= 64; ++k) {
        const MomentReport r = kp_check(Rational(k, 64));
        EXPECT_LE(r.formula_value, Rational(1, 2));
        EXPECT_EQ(r.formula_value, *r.brute_force_value);
        EXPECT_TRUE(*r.satisfied);
    }
}

TEST(Chebyshev, Examples) {
    const MomentReport r = chebyshev_check(4, Rational(1, 2), 2);
    EXPECT_EQ(r.formula_value, Rational(1, 8));
    EXPECT_EQ(*r.bound_value, Rational(1, 4));
    EXPECT_TRUE(*r.satisfied);
    const MomentReport one = chebyshev_check(16, Rational(1, 3), 1);
    EXPECT_EQ(*one.bound_value, Rational(1));
    EXPECT_TRUE(*one.satisfied);
    EXPECT_EQ(code_of([] { chebyshev_check(4, Rational(0), 2); }), ErrorCode::DegenerateP);
    EXPECT_EQ(code_of([] { chebyshev_check(4, Rational(1), 2); }), ErrorCode::DegenerateP);
    EXPECT_EQ(code_of([] { chebyshev_check(1'000'001, Rational(1, 2), 2); }), ErrorCode::TooLarge);
}

TEST(Chebyshev, TailMatchesRationalSumAndBound) {
    for (const Rational p : {Rational(1, 4), Rational(1, 2), Rational(2, 3)}) {
        for (unsigned long n : {4ul, 16ul, 64ul, 256ul}) {
            for (unsigned long k = 1; k <= 4; ++k) {
                const MomentReport r = chebyshev_check(n, p, k);
                EXPECT_EQ(r.formula_value.raw(), chebyshev_tail(n, p.raw(), k)) << n << " " << k;
                EXPECT_LE(r.formula_value, Rational(1, static_cast<long>(k * k)));
            }
        }
    }
}

TEST(ExactUnion, Examples) {
    const MeasureEstimate m = exact_union_measure(Rational(1, 2), 1, 1);
    EXPECT_EQ(m.method, "exact-dp");
    EXPECT_EQ(*m.value, Rational(1, 8));
    EXPECT_EQ(*exact_union_measure(Rational(0), 1, 3).value, Rational(0));
    EXPECT_EQ(*exact_union_measure(Rational(0), 2, 4).value, Rational(0));
    const MeasureEstimate third = exact_union_measure(Rational(1, 3), 2, 3);
    EXPECT_LE(*third.value, Rational(1, 4));
    EXPECT_TRUE(third.satisfied);
    EXPECT_EQ(code_of([] { exact_union_measure(Rational(1, 2), 1, 6); }), ErrorCode::TooLarge);
}

TEST(ExactUnion, MatchesEnumeration) {
    for (const Rational p : {Rational(1, 2), Rational(1, 3), Rational(3, 10), Rational(1, 16), Rational(1)}) {
        for (int b_max = 1; b_max <= 3; ++b_max) {
            for (int d = 1; d <= b_max; ++d) {
                EXPECT_EQ(exact_union_measure(p, d, b_max).value->raw(), oracle::union_by_enumeration(p.raw(), d, b_max))
                    << p.str() << " d=" << d << " b_max=" << b_max;
            }
        }
    }
}

TEST(ExactUnion, BoundAndMonotonicity) {
    for (long k = 0; k <= 16; ++k) {
        const Rational p(k, 16);
        for (int b_max = 1; b_max <= 4; ++b_max) {
            for (int d = 1; d <= b_max; ++d) {
                const Rational v = *exact_union_measure(p, d, b_max).value;
                EXPECT_LE(v, Rational::pow2_neg(static_cast<unsigned>(d)));
                if (d < b_max) EXPECT_GE(v, *exact_union_measure(p, d + 1, b_max).value);
                if (b_max < 4) EXPECT_LE(v, *exact_union_measure(p, d, b_max + 1).value);
            }
        }
    }
}

TEST(Wilson, MatchesReferenceValues) {
    const WilsonInterval a = wilson99(10, 100);
    EXPECT_NEAR(a.low, 0.04602581170103505, 1e-12);
    EXPECT_NEAR(a.high, 0.2037507384716234, 1e-12);
    const WilsonInterval b = wilson99(0, 50);
    EXPECT_NEAR(b.low, 0.0, 1e-12);
    EXPECT_NEAR(b.high, 0.11715209171762801, 1e-12);
    const WilsonInterval c = wilson99(12500, 100000);
    EXPECT_NEAR(c.low, 0.12233098692055264, 1e-12);
    EXPECT_NEAR(c.high, 0.1277187715025351, 1e-12);
}

TEST(MonteCarlo, Errors) {
    EXPECT_EQ(code_of([] { mc_estimate(OracleSpec{1, 1}, RealParam(Rational(1, 2)), 0, 4, 1); }), ErrorCode::ZeroTrials);
    EXPECT_EQ(code_of([] { mc_estimate(CauchySpec{1, 3}, RealParam(Rational(1, 2)), 10, 100, 1); }), ErrorCode::PrefixTooShort);
}

TEST(MonteCarlo, ReproducibleAndSeedSensitive) {
    const TestSpec spec = CauchySpec{1, 3};
    const RealParam p(Rational(3, 10));
    setenv("HIPPOC_THREADS", "1", 1);
    const MeasureEstimate a = mc_estimate(spec, p, 3000, 256, 42);
    setenv("HIPPOC_THREADS", "3", 1);
    const MeasureEstimate b = mc_estimate(spec, p, 3000, 256, 42);
    unsetenv("HIPPOC_THREADS");
    EXPECT_EQ(a.hits, b.hits);
    EXPECT_EQ(a.ci_low, b.ci_low);
    EXPECT_EQ(a.method, "monte-carlo");
    EXPECT_EQ(a.ci_method, "wilson-score-99");
    EXPECT_NE(a.hits, mc_estimate(spec, p, 3000, 256, 43).hits);
}

TEST(MonteCarlo, CauchyRateExample) {
    const MeasureEstimate m = mc_estimate(CauchySpec{3, 4}, RealParam(Rational(3, 10)), 20000, 2048, 7);
    EXPECT_EQ(m.bound, Rational(1, 8));
    EXPECT_TRUE(m.satisfied);
}

TEST(MonteCarlo, AgreesWithExactAcrossSeeds) {
    const Rational exact = *exact_union_measure(Rational(1, 2), 1, 1).value;
    int inside = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const MeasureEstimate m = mc_estimate(OracleSpec{1, 1}, RealParam(Rational(1, 2)), 4000, 4, seed);
        const double rate = static_cast<double>(m.hits) / 4000.0;
        if (std::abs(rate - exact.to_double()) <= m.ci_halfwidth) ++inside;
    }
    EXPECT_GE(inside, 99);
}

TEST(MonteCarlo, SllnAndDiagonalBounds) {
    const MeasureEstimate s = mc_estimate(SllnSpec{Rational(1, 10), Rational(9, 10), 1173, 1 << 14},
                                          RealParam(Rational(1, 2)), 500, 1 << 14, 3);
    EXPECT_EQ(s.bound, slln_bound(Rational(1, 2), Rational(1, 10), Rational(9, 10), 1173));
    EXPECT_TRUE(s.satisfied);
    const MeasureEstimate g = mc_estimate(DiagonalSpec{3, 8, 6}, RealParam(Rational(3, 10)), 300, 131072, 4);
    EXPECT_EQ(g.bound, Rational(1, 4));
    EXPECT_TRUE(g.satisfied);
}
