#include <gtest/gtest.h>

#include <cmath>

#include "oscillab/errors.hpp"
#include "oscillab/flatness.hpp"

using namespace oscillab;

TEST(BangLevel, GevreyTwo) {
    auto M = CarlemanFamily::gevrey(2.0);
    // largest l with T(l) > 4 K x; T(9) = 0.1175, T(10) = 0.1052
    BangLevel b = bang_level(M, 1.0, 0.11 / 4.0);
    ASSERT_TRUE(b.index.exact.has_value());
    EXPECT_EQ(*b.index.exact, 9);
    EXPECT_TRUE(bang_level(CarlemanFamily::gevrey(1.0), 1.0, 0.1).infinite);
    EXPECT_THROW(bang_level(M, 1.0, 1.5), DomainError);
}

TEST(BangBound, PackagedForm) {
    auto M = CarlemanFamily::gevrey(2.0);
    FlatBoundCertificate c = bang_bound(M, 1.0, 2.0, 0.11 / 4.0);
    EXPECT_NEAR(c.bound.lv, std::log(2.0) - 9 * std::log(2.0), 1e-14);
    EXPECT_DOUBLE_EQ(c.c, 0.25);
    EXPECT_DOUBLE_EQ(c.C, 4.0);
}

// the recursion table stays below the packaged 2^-l form
TEST(BangChain, BelowPackagedBound) {
    auto M = CarlemanFamily::gevrey(2.0);
    const double K = 1.5;
    auto logA = bang_sequence(M, K, 3000);
    for (double x : {0.02, 0.05, 0.1}) {
        BangLevel lvl = bang_level(M, K, x);
        int ell = static_cast<int>(*lvl.index.exact);
        ChainResult r = bang_chain_oracle(logA, x, ell);
        EXPECT_LE(r.log_bound, logA[0] - ell * std::log(2.0) + 1e-9) << x;
        EXPECT_LE(r.log_bound, r.log_claim + 1e-9) << x;
    }
}

TEST(BangChain, RejectsNonMonotoneQuotients) {
    std::vector<double> logA{0.0, 2.0, 2.5, 5.0};
    EXPECT_THROW(bang_chain_oracle(logA, 0.1, 1), DomainError);
}

TEST(Compare, GevreyDominatedAndTaylorWins) {
    auto M = CarlemanFamily::gevrey(2.0);
    std::vector<double> t;
    for (int i = 0; i < 32; ++i) t.push_back(0.02 * std::pow(25.0, i / 31.0));
    CompareTable tab = compare_methods(M, 1.4322, true, PhaseSpec::gevrey(2.0), t);
    ASSERT_EQ(tab.rows.size(), 32u);
    for (const auto& r : tab.rows) {
        EXPECT_TRUE(less_equal(r.actual, r.tl));
        EXPECT_TRUE(less_equal(r.actual, r.bang));
    }
    double t_star = 0;
    EXPECT_EQ(ordering_prefix(tab, "taylor_legendre", t_star), 32);
    EXPECT_THROW(compare_methods(M, 1.4322, false, PhaseSpec::gevrey(2.0), t), DomainError);
}

TEST(Compare, TooSmallConstantIsCaught) {
    auto M = CarlemanFamily::gevrey(2.0);
    EXPECT_THROW(compare_methods(M, 1e-3, true, PhaseSpec::gevrey(2.0), {0.3}), ClassMismatch);
}

TEST(Compare, RankBoundsSkipsDomination) {
    auto M = CarlemanFamily::gevrey(2.0);
    CompareTable tab = rank_bounds(M, 1e-3, {0.3});
    ASSERT_EQ(tab.rows.size(), 1u);
    EXPECT_FALSE(tab.rows[0].winner.empty());
}
