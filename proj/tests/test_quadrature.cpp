#include <gtest/gtest.h>
#include <gsl/gsl_sf_expint.h>

#include <cmath>

#include "oscillab/phases.hpp"
#include "oscillab/quadrature.hpp"

using namespace oscillab;

namespace {
const double kEuler = 0.57721566490153286061;
}

// psi = t^2 on t > 0 and 0 on t < 0 gives
// m = (Ci(lam) - gamma - log lam + i Si(lam)) / 2.
TEST(ComputeM, PowerPhaseMatchesCiSi) {
    PhaseSpec p = PhaseSpec::power(1);
    for (double lam : {1.0, 10.0, 250.0, 4000.0, 1e7, 1e9}) {
        cplx m = compute_m_direct(p, lam).value;
        double re = 0.5 * (gsl_sf_Ci(lam) - kEuler - std::log(lam));
        double im = 0.5 * gsl_sf_Si(lam);
        EXPECT_NEAR(m.real(), re, 1e-8) << lam;
        EXPECT_NEAR(m.imag(), im, 1e-8) << lam;
    }
}

// odd t^3 on both sides: m = (2i/3) Si(lam)
TEST(ComputeM, OddCubicMatchesSi) {
    PhaseSpec p = parse_phase("poly:c=0;0;0;1");
    for (double lam : {3.0, 300.0, 3e4}) {
        cplx m = compute_m_direct(p, lam).value;
        EXPECT_NEAR(m.real(), 0.0, 1e-9);
        EXPECT_NEAR(m.imag(), 2.0 / 3.0 * gsl_sf_Si(lam), 1e-8) << lam;
    }
}

// a constant term cancels in psi(t) - psi(-t) only through Horner on the odd part
TEST(ComputeM, PolynomialConstantTermIsHarmless) {
    PhaseSpec a = parse_phase("poly:c=0;1;0;1");
    PhaseSpec b = parse_phase("poly:c=50;1;0;1");
    QuadratureReport ra = compute_m_direct(a, 200.0), rb = compute_m_direct(b, 200.0);
    EXPECT_NEAR(std::abs(ra.value - rb.value * std::exp(cplx(0.0, -200.0 * 50.0))), 0.0, 1e-7);
    EXPECT_LT(rb.nodes_used, 100000);
}

TEST(ComputeM, ZeroFrequency) {
    QuadratureReport r = compute_m_direct(PhaseSpec::gevrey(2.0), 0.0);
    EXPECT_EQ(r.value, cplx(0.0, 0.0));
    EXPECT_EQ(r.strategy, "zero");
}

TEST(ComputeM, SubstitutionAgreesWithDirect) {
    for (const char* s : {"gevrey:s=2", "logpower:alpha=2"}) {
        PhaseSpec p = parse_phase(s);
        SubstitutionWeight w = matched_weight(p);
        for (double lam : {10.0, 1000.0}) {
            cplx d = compute_m_direct(p, lam).value;
            cplx u = compute_m_substituted(w, weight_prefactor(w), lam).value;
            EXPECT_LT(std::abs(d - u), 1e-6) << s << " lam=" << lam;
        }
    }
}

TEST(ComputeM, PlateauExactFrequencyIsBetweenBounds) {
    PhaseSpec p = PhaseSpec::plateau(2, 1);
    OddProductLadder L = build_ladder(2, 1, 3);
    for (int n = 1; n <= 3; ++n) {
        cplx m = compute_m_direct(p, L, n).value;
        EXPECT_GE(-m.real(), 2.0 * n * std::log(4.0 / 3.0));
        EXPECT_GE(-m.real(), certified_nonneg_realpart(p, L, n) - 1e-9);
    }
}

TEST(QuadratureConfig, RejectsBadValues) {
    QuadratureConfig c;
    c.rel_tol = -1.0;
    EXPECT_THROW(c.validate(), DomainError);
}

TEST(Vdc, VanishingOrder) {
    EXPECT_EQ(vanishing_order(parse_phase("poly:c=0;0;0;1")), 3);
    EXPECT_EQ(vanishing_order(parse_phase("poly:c=0;2;0;1")), 1);
}

TEST(Vdc, CubicEnvelopeHolds) {
    VdcCheck r = vdc_check(parse_phase("poly:c=0;0;0;1"), 1e3, {1e4}, 0, 14);
    EXPECT_EQ(r.k, 3);
    EXPECT_TRUE(r.pass);
    for (const auto& row : r.rows) EXPECT_LE(row.ratio, r.C);
}
