#include <gtest/gtest.h>

#include <cmath>

#include "oscillab/errors.hpp"
#include "oscillab/phases.hpp"

using namespace oscillab;

TEST(Phase, ClosedForms) {
    EXPECT_DOUBLE_EQ(eval_phase(PhaseSpec::power(2), 0.5), 0.125);
    EXPECT_EQ(eval_phase(PhaseSpec::power(2), -0.5), 0.0);
    EXPECT_NEAR(eval_phase(PhaseSpec::gevrey(2.0), 0.25), std::exp(-4.0), 1e-17);
    EXPECT_NEAR(eval_phase(PhaseSpec::gevrey(3.0), 0.25), std::exp(-2.0), 1e-16);
    // beta = 2 for alpha = 2
    double L = std::log(1.0 / 0.1);
    EXPECT_NEAR(eval_phase(PhaseSpec::log_power(2.0), 0.1), std::exp(-L * L), 1e-14 * std::exp(-L * L));
    EXPECT_NEAR(eval_phase(parse_phase("poly:c=1;2;3"), -0.5), 1.0 - 1.0 + 0.75, 1e-15);
}

TEST(Phase, LogSpaceSurvivesUnderflow) {
    LogMag v = log_phase(PhaseSpec::gevrey(2.0), 1e-5);
    EXPECT_NEAR(v.lv, -1e5, 1e-9);
    LogMag w = log_phase(PhaseSpec::iterated_exp(2, 2.0), 0.01);
    // E_2(100) = exp(exp(100))
    EXPECT_NEAR(w.llv, std::exp(100.0), 1e-12 * std::exp(100.0));
}

TEST(Phase, Flags) {
    EXPECT_TRUE(PhaseSpec::gevrey(2.0).flat());
    EXPECT_FALSE(PhaseSpec::power(1).flat());
    EXPECT_FALSE(parse_phase("poly:c=0;1").one_sided());
    EXPECT_NEAR(PhaseSpec::log_power(2.0).domain_radius(), std::exp(-1.0), 1e-16);
}

TEST(Phase, PlateauShellsAreConstant) {
    PhaseSpec p = PhaseSpec::plateau(2, 1);
    // eta = 1 on [3/5, 4/5] so on 2^j t in that range only shell j contributes
    EXPECT_EQ(eval_phase(p, 0.7), 0.0);
    EXPECT_NEAR(eval_phase(p, 0.35), M_PI / 5.0, 1e-15);
    EXPECT_NEAR(eval_phase(p, 0.175), M_PI / 35.0, 1e-15);
    EXPECT_NEAR(eval_phase(p, 0.0875), M_PI / 315.0, 1e-15);
}

TEST(Phase, SmoothStep) {
    EXPECT_EQ(smooth_step(-1.0), 0.0);
    EXPECT_EQ(smooth_step(2.0), 1.0);
    EXPECT_NEAR(smooth_step(0.5), 0.5, 1e-15);
    for (double y = 0.01; y < 1.0; y += 0.01) EXPECT_NEAR(smooth_step(y) + smooth_step(1.0 - y), 1.0, 1e-14);
}

TEST(Phase, JsonRoundTrip) {
    for (const char* s : {"power:alpha=1", "plateau:k=2,j0=1", "gevrey:s=2", "iterexp:k=2,s=2", "logpower:alpha=2",
                          "intermediate:k=2,alpha=1", "poly:c=0;1;0;1"}) {
        PhaseSpec a = parse_phase(s);
        std::string j = phase_to_json(a);
        EXPECT_EQ(phase_to_json(phase_from_json(j)), j) << s;
        EXPECT_EQ(parse_phase(j).name(), a.name());
    }
}

TEST(Phase, RejectsBadInput) {
    EXPECT_THROW(parse_phase("bogus"), ConfigError);
    EXPECT_THROW(PhaseSpec::plateau(2, 0), InvalidJ0);
    EXPECT_THROW(eval_phase(PhaseSpec::gevrey(2.0), 1.5), DomainError);
}

TEST(Phase, InverseAndElasticity) {
    PhaseSpec p = PhaseSpec::gevrey(2.0);
    InversePoint ip = phase_inverse(p, -10.0);
    EXPECT_NEAR(ip.t, 0.1, 1e-14);
    // D = t psi'/psi = 1/t for exp(-1/t)
    EXPECT_NEAR(ip.elasticity, 10.0, 1e-10);
}

TEST(Weight, MatchesPhase) {
    for (const char* s : {"gevrey:s=2", "logpower:alpha=2", "intermediate:k=2,alpha=1"}) {
        PhaseSpec p = parse_phase(s);
        double r = p.domain_radius();
        std::vector<double> grid;
        for (int i = 1; i <= 20; ++i) grid.push_back(r * (0.3 + 0.03 * i));
        EXPECT_TRUE(weight_consistency(p, matched_weight(p), grid).pass) << s;
    }
}
