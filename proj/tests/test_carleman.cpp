#include <gtest/gtest.h>
#include <gsl/gsl_sf_psi.h>
#include <gsl/gsl_sf_zeta.h>

#include <cmath>

#include "oscillab/carleman.hpp"
#include "oscillab/errors.hpp"

using namespace oscillab;

// Gevrey(s): mu_j = j^s, so T(N) is a Hurwitz zeta value.
TEST(Tail, GevreyIsHurwitzZeta) {
    auto M = CarlemanFamily::gevrey(2.0);
    EXPECT_NEAR(tail(M, 1).value, M_PI * M_PI / 6.0, 1e-12);
    for (std::int64_t N : {1, 2, 7, 100, 100000}) {
        EXPECT_NEAR(tail(M, N).value, gsl_sf_psi_1(static_cast<double>(N)), 1e-11 * gsl_sf_psi_1(N)) << N;
    }
    auto M3 = CarlemanFamily::gevrey(3.0);
    EXPECT_NEAR(tail(M3, 5).value, gsl_sf_hzeta(3.0, 5.0), 1e-12);
}

TEST(Tail, ExpPowerAgainstDirectSum) {
    auto M = CarlemanFamily::exp_power(0.5, 2.0);
    // mu_j = exp(c (j^2 - (j-1)^2)) = exp(c (2j - 1))
    long double s = 0;
    for (int j = 400; j >= 3; --j) s += std::exp(-0.5L * (2.0L * j - 1.0L));
    EXPECT_NEAR(tail(M, 3).value, static_cast<double>(s), 1e-13);
}

TEST(Tail, DivergentFamily) {
    EXPECT_TRUE(tail(CarlemanFamily::gevrey(1.0), 1).diverges);
    EXPECT_EQ(quasianalytic(CarlemanFamily::gevrey(1.0)), Tristate::True);
    EXPECT_EQ(quasianalytic(CarlemanFamily::gevrey(2.0)), Tristate::False);
}

TEST(InverseTail, GevreyTwo) {
    auto M = CarlemanFamily::gevrey(2.0);
    // T(10) = 0.10516..., T(11) = 0.09516...
    EXPECT_EQ(inverse_tail(M, 0.1), 10);
    EXPECT_EQ(inverse_tail(M, 0.105), 10);
    EXPECT_EQ(inverse_tail(M, 0.106), 9);
}

TEST(Legendre, MatchesEnumeration) {
    for (double s : {1.5, 2.0, 3.0}) {
        auto M = CarlemanFamily::gevrey(s);
        for (double y : {0.5, 2.0, std::log(10.0), 4.0}) {
            double best = -INFINITY;
            std::int64_t at = 0;
            for (std::int64_t n = 1; n < 5000; ++n) {
                double f = static_cast<double>(n) * y - M.phi(n);
                if (f > best) best = f, at = n;
            }
            LegendreResult r = legendre(M, y);
            EXPECT_NEAR(r.value, best, 1e-10 * std::max(1.0, best)) << s << " " << y;
            EXPECT_EQ(r.argmax.front(), at);
        }
    }
}

TEST(Legendre, TieAtLogTen) {
    LegendreResult r = legendre(CarlemanFamily::gevrey(2.0), std::log(10.0));
    EXPECT_NEAR(r.value, 7.921438356864943, 1e-12);
    ASSERT_EQ(r.argmax.size(), 2u);
    EXPECT_EQ(r.argmax[0], 9);
    EXPECT_EQ(r.argmax[1], 10);
}

TEST(Legendre, AsymptoticBeyondBudget) {
    auto M = CarlemanFamily::gevrey(2.0);
    // maximizer e^y far past 2^62
    LegendreResult r = legendre(M, 100.0);
    EXPECT_TRUE(r.asymptotic);
    EXPECT_NEAR(r.log_argmax, 100.0, 1e-12);
    EXPECT_THROW(legendre(M, 100.0, 1000), BudgetExhausted);
}

TEST(TaylorLegendre, GuardAndValue) {
    auto M = CarlemanFamily::gevrey(2.0);
    double K = 1.0, t = 0.1;
    EXPECT_NEAR(taylor_legendre_bound(M, K, t), K * std::exp(-7.921438356864943), 1e-15);
    EXPECT_THROW(taylor_legendre_bound(M, 2.0, 0.6), DomainError);
}

TEST(Family, ParseAndSerializeRoundTrip) {
    for (const char* s : {"gevrey:s=2", "refined:k=2,s=2", "exppower:c=0.5,alpha=2", "iterexp:k=2,c=1,alpha=1"}) {
        CarlemanFamily a = parse_family(s);
        CarlemanFamily b = parse_family(family_to_json(a));
        EXPECT_EQ(a.name(), b.name());
        EXPECT_DOUBLE_EQ(a.logM(7), b.logM(7));
    }
    EXPECT_THROW(parse_family("nope:s=1"), ConfigError);
    EXPECT_THROW(parse_family("gevrey:s=x"), ConfigError);
}

TEST(Family, RefinedIsLogConvex) {
    auto M = CarlemanFamily::refined_gevrey(2, 2.0);
    EXPECT_DOUBLE_EQ(M.logM(0), 0.0);
    for (std::int64_t n = 2; n < 3000; n += 37) EXPECT_LE(M.logmu(n - 1), M.logmu(n) + 1e-12) << n;
}
