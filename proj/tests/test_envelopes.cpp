#include <gtest/gtest.h>

#include <cmath>

#include "oscillab/envelopes.hpp"
#include "oscillab/errors.hpp"

using namespace oscillab;

TEST(Envelope, Values) {
    const double lam = 1e8, L = std::log(lam);
    EXPECT_DOUBLE_EQ(envelope_eval(Envelope::log(), lam), L);
    EXPECT_NEAR(envelope_eval(Envelope::loglog(), lam), std::log(L), 1e-14);
    EXPECT_NEAR(envelope_eval(Envelope::log_pow(0.5), lam), std::sqrt(L), 1e-14);
    EXPECT_NEAR(envelope_eval(Envelope::log_over_iter_log(2), lam), L / std::log(L), 1e-13);
    EXPECT_NEAR(envelope_eval(Envelope::iter_log(3), lam), std::log(std::log(L)), 1e-14);
    EXPECT_EQ(envelope_eval(Envelope::constant(), lam), 1.0);
}

TEST(Envelope, StrictHierarchyAtOneHundredMillion) {
    const Envelope order[] = {Envelope::constant(), Envelope::iter_log(3), Envelope::loglog(),
                              Envelope::log_pow(0.5), Envelope::log_over_iter_log(2), Envelope::log()};
    for (int i = 1; i < 6; ++i)
        EXPECT_LT(envelope_eval(order[i - 1], 1e8), envelope_eval(order[i], 1e8)) << order[i].name();
}

TEST(Envelope, ThresholdAndBigInt) {
    EXPECT_NEAR(Envelope::log_over_iter_log(2).threshold(), std::exp(std::exp(1.0)), 1e-12);
    EXPECT_THROW(envelope_eval(Envelope::log_over_iter_log(2), 10.0), DomainError);
    BigInt big = BigInt(1) << 400;
    EXPECT_NEAR(envelope_eval(Envelope::log(), big), 400 * std::log(2.0), 1e-10);
}

TEST(Envelope, Parse) {
    EXPECT_EQ(parse_envelope("log").name(), Envelope::log().name());
    EXPECT_EQ(parse_envelope("iterlog:k=3").name(), Envelope::iter_log(3).name());
    EXPECT_EQ(parse_envelope("logpow:p=0.5").name(), Envelope::log_pow(0.5).name());
    EXPECT_THROW(parse_envelope("sqrt"), ConfigError);
    EXPECT_THROW(parse_envelope("iterlog:k=zz"), ConfigError);
}

namespace {
GrowthSeries synthetic(double scale, double wobble) {
    GrowthSeries s;
    for (int i = 0; i < 12; ++i) {
        double lam = std::pow(10.0, 2 + 0.5 * i);
        double v = scale * std::log(lam) * (1.0 + wobble * std::sin(i));
        s.add(lam, cplx(-v, 0.3), 0.0);
    }
    return s;
}
}  // namespace

TEST(FitGrowth, AcceptsMatchingEnvelope) {
    GrowthVerdict v = fit_growth(synthetic(0.5, 0.0), Envelope::log(), FitMode::NegRe);
    EXPECT_TRUE(v.pass);
    EXPECT_NEAR(v.min_ratio, 0.5, 1e-12);
    EXPECT_NEAR(v.band, 1.0, 1e-12);
    EXPECT_NEAR(v.elasticity, 0.0, 1e-9);
}

TEST(FitGrowth, RejectsWrongEnvelope) {
    // log lam measured against log log lam: the ratio keeps growing
    GrowthVerdict v = fit_growth(synthetic(1.0, 0.0), Envelope::loglog(), FitMode::NegRe);
    EXPECT_FALSE(v.pass);
    EXPECT_GT(v.elasticity, 0.5);
}

TEST(FitGrowth, NeedsRange) {
    GrowthSeries s;
    for (int i = 0; i < 5; ++i) s.add(100.0 + i, cplx(1.0, 0.0), 0.0);
    EXPECT_THROW(fit_growth(s, Envelope::log()), InsufficientRange);
}

TEST(PolySweep, DeterministicAndBounded) {
    SweepTable a = polynomial_sweep(1, 6, 3, 50.0, 7);
    SweepTable b = polynomial_sweep(1, 6, 3, 50.0, 7);
    ASSERT_EQ(a.rows.size(), 6u);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].max_random, b.rows[i].max_random);
        EXPECT_LE(a.rows[i].max_abs, 3.0 * std::log(a.rows[i].d) + 10.0);
    }
    EXPECT_EQ(a.rows[0].ratio, 0.0);
    EXPECT_THROW(polynomial_sweep(1, 41, 1, 1.0, 1), DomainError);
}
