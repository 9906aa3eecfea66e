#include <gtest/gtest.h>

#include <cmath>

#include "oscillab/derivlab.hpp"

using namespace oscillab;

namespace {
BigInt factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}
}  // namespace

// unsigned row sums of the log-derivative triangle stay below n!
TEST(Triangle, SmallRowsAndBound) {
    LogDerivTriangle T = build_triangle(30);
    EXPECT_EQ(abs(T.at(1, 1)), BigInt(1));
    // f''/f = (log f)'' + ((log f)')^2
    EXPECT_EQ(T.abs_row_sum(2), BigInt(2));
    for (int n = 1; n <= 30; ++n) EXPECT_LE(T.abs_row_sum(n), factorial(n)) << n;
}

// psi = exp(g): psi'/psi = g', psi''/psi = g'' + g'^2 with g = -1/t
TEST(Derivative, ClosedFormGevrey) {
    PhaseSpec p = PhaseSpec::gevrey(2.0);
    double t = 0.3, psi = std::exp(-1.0 / t);
    double g1 = 1.0 / (t * t), g2 = -2.0 / (t * t * t);
    EXPECT_NEAR(closed_form_derivative(p, t, 1), psi * g1, 1e-12 * psi * g1);
    EXPECT_NEAR(closed_form_derivative(p, t, 2), psi * (g2 + g1 * g1), 1e-12 * std::abs(psi * (g2 + g1 * g1)));
    ContourDerivative c = contour_derivative(p, t, 2);
    EXPECT_TRUE(c.precise);
    EXPECT_NEAR(c.d.value(), psi * (g2 + g1 * g1), 1e-9 * std::abs(psi * (g2 + g1 * g1)));
}

TEST(Derivative, TwoPathsAgree) {
    for (const char* s : {"logpower:alpha=2", "logpower:alpha=3"}) {
        PhaseSpec p = parse_phase(s);
        for (int n = 1; n <= 8; ++n) EXPECT_LT(two_path_derivative(p, 0.2, n).rel_error, 1e-8) << s << n;
    }
}

TEST(Bell, FirstValuesAndBound) {
    auto B = bell_numbers(20);
    const long long want[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975};
    for (int k = 0; k <= 10; ++k) EXPECT_EQ(B[k], BigInt(want[k]));
    for (int k = 1; k <= 20; ++k) EXPECT_LE(B[k], boost::multiprecision::pow(BigInt(k), k));
}

TEST(Membership, GevreyInOwnClass) {
    std::vector<double> grid;
    for (int i = 0; i < 200; ++i) grid.push_back(0.005 * std::pow(200.0, i / 199.0));
    MembershipReport r = verify_membership(PhaseSpec::gevrey(2.0), CarlemanFamily::gevrey(2.0), 0, 12, grid);
    EXPECT_TRUE(r.stable);
    EXPECT_NEAR(r.K_hat, 1.43, 0.02);
    MembershipReport w = verify_membership(PhaseSpec::gevrey(2.0), CarlemanFamily::gevrey(1.0), 0, 12, grid);
    EXPECT_FALSE(w.stable);
    EXPECT_GT(w.K_hat, 2.0 * r.K_hat);
}

TEST(Bounds, AuxiliaryChecksPass) {
    std::vector<double> u;
    for (int i = 0; i < 20; ++i) u.push_back(std::pow(30.0, i / 19.0));
    EXPECT_TRUE(gk_bound_check(1.5, 1, 8, u).pass);
    std::vector<double> big;
    for (int i = 0; i < 20; ++i) big.push_back(10.0 * std::pow(1e5, i / 19.0));
    EXPECT_TRUE(AQ_check(2, 1.0, big).pass);
    std::vector<double> x{1.0, 1.5, 2.0};
    EXPECT_TRUE(ek_bound_check(3, 8, x).pass);
    std::vector<double> g;
    for (int i = 0; i < 20; ++i) g.push_back(3.0 * std::pow(3000.0, i / 19.0));
    EXPECT_TRUE(g_bound_check(2, 1.0, 6, g).pass);
}

TEST(FlatPoint, DifferencesVanish) {
    auto rows = flat_point_differences(PhaseSpec::gevrey(2.0), 4);
    for (const auto& r : rows) EXPECT_TRUE(r.vanishing) << r.m;
}
