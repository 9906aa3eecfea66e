#pragma once

#include <string>
#include <vector>

#include "oscillab/ladder.hpp"
#include "oscillab/phases.hpp"
#include "oscillab/quadrature.hpp"

namespace oscillab {

// 2 n log(4/3): the plateaus J_j, j <= n, each contribute exactly 2 log(4/3).
double plateau_lower_bound(int n);

struct PlateauUpper {
    double value = 0.0;
    double head = 0.0;       // 2 n log 2
    double tail_sum = 0.0;   // sum_{j>n} Q_n/Q_j, exact rationals rounded once
    double remainder = 0.0;  // geometric majorant of the terms not summed
    int terms = 0;
};

// 2 n log 2 + pi log 2 sum_{j>n} Q_n/Q_j. Terms are summed as exact rationals
// until one drops below 1e-18; the rest is bounded by T/(q - 1) with T the
// last term and q the next multiplier. The ladder is extended as needed.
PlateauUpper plateau_upper_bound_detail(const OddProductLadder& L, int n);
double plateau_upper_bound(const OddProductLadder& L, int n);

struct GrowthWindowConfig {
    QuadratureConfig quad;
    double tol = 1e-4;
    double oscillation_cap = 1e6;  // full quadrature only when sum_{j<=n} Q_n/Q_j is below this
};

struct GrowthWindowReport {
    int n = 0;
    std::string Q_n;         // decimal
    double oscillations = 0.0;
    std::string mode;        // "full" or "certified"
    double lower = 0.0;
    double upper = 0.0;
    double neg_re = 0.0;     // -Re m(Q_n), full mode only
    double abs_m = 0.0;      // full mode only
    double certified = 0.0;  // plateau-only lower bound, both modes
    double est_error = 0.0;
    bool lower_ok = false;
    bool upper_ok = true;    // not checked in certified mode
    bool pass = false;
    std::string note;
};

GrowthWindowReport verify_growth_window(const OddProductLadder& L, const PhaseSpec& spec, int n,
                                        const GrowthWindowConfig& cfg = {});

struct RatioRow {
    int n = 0;
    double log_Q = 0.0;
    double ratio = 0.0;  // n / (log Q_n / log^(k) Q_n)
};
struct RatioReport {
    std::vector<RatioRow> rows;
    double lo = 0.0, hi = 0.0;
    bool pass = false;  // all ratios in [1/10, 10]
};

RatioReport ratio_law(const OddProductLadder& L, int n_lo, int n_hi);

struct SmoothnessRow {
    int m = 0;
    double log_peak = 0.0;  // max over j <= j_max of log(2^{jm}/Q_j)
    int argpeak = 0;
    int turnover = 0;       // first j with q_{j+1} > 2^m, exact; 0 when not reached
    bool decays = false;    // strictly decreasing from turnover through j_check
};
struct SmoothnessReport {
    std::vector<SmoothnessRow> rows;
    int j_max = 0, j_check = 0;
    bool pass = false;
};

// Terms 2^{jm}/Q_j shrink by 2^m/q_{j+1} per step, so past the first j with
// q_{j+1} > 2^m they decrease geometrically to 0 (q_j is unbounded). The check
// locates that index exactly and confirms the decrease on exact integers.
SmoothnessReport smoothness_proxy(int k, int j0, int m_max = 6, int j_max = 30, int j_check = 60);

}  // namespace oscillab
