#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "oscillab/carleman.hpp"
#include "oscillab/ladder.hpp"
#include "oscillab/phases.hpp"

namespace oscillab {

// d^n/dt^n g(log 1/t) = t^-n sum_k a_{n,k} g^(k)(log 1/t).
struct LogDerivTriangle {
    int n_max = 0;
    std::vector<std::vector<BigInt>> a;  // a[n][k], 1 <= k <= n; index 0 unused

    const BigInt& at(int n, int k) const { return a.at(n).at(k); }
    BigInt abs_row_sum(int n) const;
};

LogDerivTriangle build_triangle(int n_max);

// A signed real kept as log|v|; log_abs = -inf encodes zero.
struct SignedLog {
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0;
    double value() const;
};

struct ContourDerivative {
    SignedLog d;
    double radius = 0.0;
    // false when every circle tried left the coefficient at roundoff level;
    // d is then only a noise-level magnitude
    bool precise = true;
};

// Cauchy differentiation on a circle of the given radius around t, with the
// trapezoid node count doubled from 64 until two levels agree to 1e-8. A
// non-positive radius selects the saddle radius, the minimizer of
// log max|psi| - n log r over r <= 0.95 t, where the coefficient stays well
// above roundoff. Throws NoConvergence past 2^16 nodes. When psi(t) or its
// elasticity leaves double range the result is reported as zero (sign 0).
ContourDerivative contour_derivative(const PhaseSpec& spec, double t, int n, double radius = -1.0);

// Closed-form psi^(n) for GevreyFlat(s = 2) and PowerPhase, used as oracles.
double closed_form_derivative(const PhaseSpec& spec, double t, int n);

struct TwoPathResult {
    double triangle = 0.0;  // scaled by psi(t)^-1
    double contour = 0.0;   // scaled by psi(t)^-1
    double rel_error = 0.0;
};

// psi^(n)(t)/psi(t) through the triangle and the u-derivatives of g, against
// direct contour differentiation in t. LogPower uses complete Bell
// polynomials for g; Intermediate differentiates g by a contour in u.
TwoPathResult two_path_derivative(const PhaseSpec& spec, double t, int n);

struct MembershipRow {
    int n = 0;
    double sup_log = 0.0;  // log sup_grid |psi^(n)|
    double argsup = 0.0;
    double logM = 0.0;
    double K_hat = 0.0;
};

struct MembershipReport {
    std::vector<MembershipRow> rows;
    double K_hat = 0.0;
    bool stable = false;       // last five K_hat_n within 20%, or nonincreasing
    int skipped_points = 0;    // grid points where psi underflows log space
    int imprecise_values = 0;  // (n, t) pairs left out for roundoff-level coefficients
};

MembershipReport verify_membership(const PhaseSpec& spec, const CarlemanFamily& M, int n_lo,
                                   int n_hi, const std::vector<double>& t_grid);

// ---- lemma checks ----

struct GkRow {
    int k = 0;
    double C0 = 0.0;
    double worst_u = 0.0;
};
struct GkReport {
    std::vector<GkRow> rows;
    double C0 = 0.0;
    bool pass = false;  // finite and <= 100
};

// Smallest C0 with |g^(k)(u)| <= C0^k k! k^k u^((beta-1)k) e^(-u^beta),
// g(u) = exp(-u^beta), on the grid.
GkReport gk_bound_check(double beta, int k_lo, int k_hi, const std::vector<double>& u_grid);

// B_0..B_kmax by the Bell triangle. Throws DomainError for k_max > 25.
std::vector<BigInt> bell_numbers(int k_max);

struct AqRow {
    double u = 0.0;
    double Qprime = 0.0;     // complex-step derivative of Q
    double identity = 0.0;   // A(u) (1 + 1/(alpha L_1 ... L_{k-1}))
    double rel_error = 0.0;
    double correction = 0.0; // Q'/A
};
struct AqReport {
    std::vector<AqRow> rows;
    bool pass = false;
};

AqReport AQ_check(int k, double alpha, const std::vector<double>& u_grid);

struct EkRow {
    int k = 0, r = 0;
    double x = 0.0;
    double ratio = 0.0;      // E_k^(r)(x) / E_k(x)
    double bound = 0.0;      // r! A_k^r M_k(x)^r
};
struct EkReport {
    std::vector<EkRow> rows;
    std::vector<double> fitted_A;  // smallest A_k that works on the grid, per k
    bool pass = false;
};

// E_k^(r)(x) <= r! A_k^r M_k(x)^r E_k(x) with A_1 = 1, A_k = 2e A_{k-1}.
EkReport ek_bound_check(int k_max, int r_max, const std::vector<double>& x_grid);

struct GRow {
    int r = 0;
    double C = 0.0;
    double worst_u = 0.0;
};
struct GReport {
    std::vector<GRow> rows;
    bool pass = false;
};

// Fitted C_r with |g^(r)(u)| <= C_r^r (r!)^2 A(u)^r e^(-Q(u)) for the
// Intermediate profile g = exp(-Q).
GReport g_bound_check(int k, double alpha, int r_max, const std::vector<double>& u_grid);

struct FlatPointRow {
    int m = 0;
    std::vector<double> log_h;
    std::vector<double> log_ratio;  // log |Delta_h^m psi(0)| / h^m
    bool vanishing = false;
};

// One-sided forward differences of psi at 0+ for orders 1..m_max. For the
// analytic flat variants log(1/h) doubles per level from log(1/h0) and stops
// once it passes 1e300; PlateauPhase halves h 16 times per level.
std::vector<FlatPointRow> flat_point_differences(const PhaseSpec& spec, int m_max,
                                                 double h0 = 0.05, int levels = 60);

}  // namespace oscillab
