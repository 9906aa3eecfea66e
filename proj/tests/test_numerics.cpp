#include <gtest/gtest.h>

#include <cmath>

#include "oscillab/errors.hpp"
#include "oscillab/iterlog.hpp"
#include "oscillab/ladder.hpp"
#include "oscillab/numerics.hpp"

using namespace oscillab;

TEST(IterLog, IdentityAndComposition) {
    EXPECT_DOUBLE_EQ(iter_log(0, 7.5), 7.5);
    EXPECT_NEAR(iter_log(2, std::exp(M_E)), 1.0, 1e-15);
    EXPECT_NEAR(iter_log(3, 1e9), std::log(std::log(std::log(1e9))), 1e-15);
    EXPECT_THROW(iter_log(2, 0.5), DomainError);
}

TEST(IterExp, InvertsIterLog) {
    EXPECT_NEAR(iter_exp(2, 1.0), std::exp(M_E), 1e-12);
    for (double x : {0.3, 1.0, 2.0}) EXPECT_NEAR(iter_log(2, iter_exp(2, x)), x, 1e-13);
    EXPECT_NEAR(iter_exp_log(3, 2.0), iter_exp(2, 2.0), 1e-9);
    EXPECT_THROW(iter_exp(3, 5.0), Overflow);
}

TEST(LogMag, OrdersAcrossUnderflow) {
    LogMag tiny = LogMag::from_loglog(1e5);   // exp(-exp(1e5))
    LogMag tinier = LogMag::from_loglog(2e5);
    LogMag small = LogMag::from_value(1e-300);
    EXPECT_TRUE(less(tinier, tiny));
    EXPECT_TRUE(less(tiny, small));
    EXPECT_FALSE(less(small, tiny));
    EXPECT_TRUE(less_equal(small, small));
    EXPECT_EQ(tiny.value(), 0.0);
}

TEST(LogMag, FormatsBelowDoubleRange) {
    EXPECT_EQ(format_logmag(LogMag::from_value(2.5e-3)), "2.500000E-3");
    // 10^-1000 is far below double range
    EXPECT_EQ(format_logmag(LogMag::from_log(-1000.0 * std::log(10.0))), "1.000000E-1000");
}

TEST(LogAdd, MatchesDirectSum) {
    EXPECT_NEAR(log_add(std::log(2.0), std::log(3.0)), std::log(5.0), 1e-15);
    EXPECT_NEAR(log_add(-1000.0, -1000.0), -1000.0 + std::log(2.0), 1e-12);
}

TEST(Ladder, OddMultipliers) {
    EXPECT_EQ(minimal_j0(2), 1);
    OddProductLadder L = build_ladder(2, 1, 6);
    // q_j = 2 (j + 1) + 1 for k = 2
    const long long Q[] = {1, 5, 35, 315, 3465, 45045, 675675};
    for (int n = 0; n <= 6; ++n) EXPECT_EQ(L.Q_at(n), BigInt(Q[n]));
    for (int n = 1; n <= 6; ++n) EXPECT_TRUE(verify_plateau_parity(L, n));
    EXPECT_EQ(ladder_q_double(2, 1, 40), 83.0);
}

TEST(Ladder, BigIntHelpers) {
    BigInt v = BigInt(1) << 200;
    EXPECT_NEAR(log_big(v), 200 * std::log(2.0), 1e-12);
    EXPECT_EQ(to_decimal(BigInt(71152682225625LL)), "71152682225625");
}
