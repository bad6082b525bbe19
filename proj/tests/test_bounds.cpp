#include <gtest/gtest.h>

#include <cmath>

#include "dguard/bounds.hpp"
#include "dguard/errors.hpp"
#include "oracles.hpp"

using namespace dguard;

TEST(Erf, ZeroAndOddness) {
    EXPECT_EQ(dguard::erf(0.0), 0.0);
    for (double x : {0.01, 0.3, 1.7, 2.9, 4.5}) {
        EXPECT_EQ(dguard::erf(-x), -dguard::erf(x));
    }
}

TEST(Erf, AgainstSeries) {
    EXPECT_NEAR(dguard::erf(1.0), 0.8427007929, 1e-10);
    for (int k = -30; k <= 30; ++k) {
        const double x = 0.1 * k;
        EXPECT_NEAR(dguard::erf(x), oracle::erf_series(x), 1e-10) << "x=" << x;
    }
}

TEST(LpLowerBound, SmallAlphaLimit) { EXPECT_NEAR(lp_lower_bound(1e-12, 1.0), 1.0, 1e-6); }

TEST(LpLowerBound, AlphaOne) {
    // 1 / (sqrt(pi) erf(1) + e^-1), evaluated with the series oracle.
    const double expected =
        1.0 / (std::sqrt(std::numbers::pi) * oracle::erf_series(1.0) + std::exp(-1.0));
    EXPECT_NEAR(lp_lower_bound(2.0, 1.0), expected, 1e-12);
    EXPECT_NEAR(lp_lower_bound(2.0, 1.0), 0.5372, 5e-5);
}

TEST(LpLowerBound, StrictlyDecreasingInAlpha) {
    double prev = 2.0;
    for (int k = 1; k <= 10000; ++k) {
        const double alpha = 0.01 * k;
        const double b = lp_lower_bound(2.0 * alpha, 1.0);
        EXPECT_LT(b, prev) << "alpha=" << alpha;
        EXPECT_GT(b, 0.0);
        EXPECT_LE(b, 1.0);
        prev = b;
    }
}

TEST(LpCompetitiveFactor, Examples) {
    EXPECT_EQ(lp_competitive_factor(2, 100, 200), 0.0);
    EXPECT_DOUBLE_EQ(lp_competitive_factor(2, 120, 500), 0.52);
    EXPECT_NEAR(lp_competitive_factor(1, 1, 1e15), 1.0, 1e-12);
    EXPECT_EQ(lp_competitive_factor(5, 120, 500), 0.0);
    EXPECT_THROW(lp_competitive_factor(0.5, 1, 1), RegimeError);
}

TEST(CausalUpperBound, Examples) {
    EXPECT_DOUBLE_EQ(causal_upper_bound(0.5, 8.0, 1.0), 1.0);   // v lambda W = 4
    EXPECT_DOUBLE_EQ(causal_upper_bound(0.5, 32.0, 1.0), 0.5);  // = 16
    double prev = 1.0;
    for (int k = 5; k < 500; ++k) {
        const double b = causal_upper_bound(0.5, static_cast<double>(k), 2.0);
        EXPECT_LT(b, prev);
        prev = b;
    }
    EXPECT_THROW(causal_upper_bound(1.0, 1, 1), RegimeError);
}

TEST(TfLowerBound, Examples) {
    EXPECT_EQ(tf_lower_bound(0.1, 1.0, 10.0), 1.0);  // v lambda W = 1 <= 1/beta^2
    EXPECT_NEAR(tf_lower_bound(0.05, 20.0, 10.0), 0.4441, 5e-5);
    EXPECT_THROW(tf_lower_bound(2.0, 1, 1), RegimeError);
}

TEST(Bounds, SandwichAndRatio) {
    for (double v : {0.01, 0.05, 0.3, 0.9}) {
        for (double lambda : {0.1, 1.0, 5.0, 50.0, 500.0}) {
            for (double w : {1.0, 10.0, 100.0}) {
                const double up = causal_upper_bound(v, lambda, w);
                const double lo = tf_lower_bound(v, lambda, w);
                EXPECT_LE(lo, up);
                EXPECT_GE(lo, 0.0);
                if (up < 1.0 && lo < 1.0) {
                    EXPECT_NEAR(up / lo, 2.0 * kBetaTsp, 1e-12);
                }
            }
        }
    }
}
