#include <gtest/gtest.h>

#include <cmath>

#include "oscillab/plateau.hpp"

using namespace oscillab;

TEST(PlateauBounds, LowerIsLinear) {
    EXPECT_EQ(plateau_lower_bound(0), 0.0);
    EXPECT_NEAR(plateau_lower_bound(3), 6.0 * std::log(4.0 / 3.0), 1e-15);
}

// oracle: the tail sum over a long floating-point ladder
TEST(PlateauBounds, UpperMatchesFloatingSum) {
    OddProductLadder L = build_ladder(2, 1, 12);
    for (int n : {0, 1, 2, 5, 12}) {
        double tail = 0.0, term = 1.0;
        for (int j = n + 1; j < n + 200; ++j) {
            term /= ladder_q_double(2, 1, j);
            tail += term;
        }
        double want = 2.0 * n * std::log(2.0) + M_PI * std::log(2.0) * tail;
        PlateauUpper u = plateau_upper_bound_detail(L, n);
        EXPECT_GE(u.value, want);
        EXPECT_NEAR(u.value, want, 1e-13 * want + 1e-15) << n;
    }
    EXPECT_NEAR(plateau_upper_bound(L, 2), 3.03835, 1e-5);
}

TEST(PlateauWindow, CertifiedModeAboveCap) {
    OddProductLadder L = build_ladder(2, 1, 10);
    GrowthWindowConfig cfg;
    cfg.oscillation_cap = 1e3;
    GrowthWindowReport r = verify_growth_window(L, PhaseSpec::plateau(2, 1), 10, cfg);
    EXPECT_EQ(r.mode, "certified");
    EXPECT_EQ(r.Q_n, "105411381075");
    EXPECT_TRUE(r.pass);
    // the plateau-only lower bound is exactly 2n log(4/3)
    EXPECT_NEAR(r.certified, r.lower, 1e-12);
}

TEST(PlateauWindow, FullModeSmallN) {
    OddProductLadder L = build_ladder(2, 1, 3);
    GrowthWindowReport r = verify_growth_window(L, PhaseSpec::plateau(2, 1), 3);
    EXPECT_EQ(r.mode, "full");
    EXPECT_TRUE(r.lower_ok);
    EXPECT_TRUE(r.upper_ok);
    EXPECT_NEAR(r.neg_re, 2.9694, 1e-3);
}

TEST(PlateauLaws, RatioAndSmoothness) {
    OddProductLadder L = build_ladder(2, 1, 20);
    RatioReport rr = ratio_law(L, 5, 20);
    EXPECT_TRUE(rr.pass);
    EXPECT_GT(rr.lo, 1.0);
    EXPECT_LT(rr.hi, 1.5);
    SmoothnessReport s = smoothness_proxy(2, 1);
    EXPECT_TRUE(s.pass);
    ASSERT_EQ(s.rows.size(), 6u);
    // q_{j+1} = 2j + 5 first exceeds 2^m at these j
    const int turn[] = {1, 1, 2, 6, 14, 30};
    for (int m = 0; m < 6; ++m) EXPECT_EQ(s.rows[m].turnover, turn[m]) << m + 1;
}
