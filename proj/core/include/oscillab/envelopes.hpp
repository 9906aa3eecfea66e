#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oscillab/iterlog.hpp"
#include "oscillab/ladder.hpp"
#include "oscillab/numerics.hpp"
#include "oscillab/quadrature.hpp"

namespace oscillab {

enum class EnvelopeKind { Log, LogOverIterLog, LogLog, IterLog, LogPow, LogOverIterLogPow, Constant };

// k counts logarithms (IterLog(3) = log log log); p is an exponent.
struct Envelope {
    EnvelopeKind kind = EnvelopeKind::Log;
    int k = 1;
    double p = 1.0;

    static Envelope log() { return {EnvelopeKind::Log, 1, 1.0}; }
    static Envelope log_over_iter_log(int k) { return {EnvelopeKind::LogOverIterLog, k, 1.0}; }
    static Envelope loglog() { return {EnvelopeKind::LogLog, 2, 1.0}; }
    static Envelope iter_log(int k) { return {EnvelopeKind::IterLog, k, 1.0}; }
    static Envelope log_pow(double p) { return {EnvelopeKind::LogPow, 1, p}; }
    static Envelope log_over_iter_log_pow(int k, double p) {
        return {EnvelopeKind::LogOverIterLogPow, k, p};
    }
    static Envelope constant() { return {EnvelopeKind::Constant, 0, 1.0}; }

    std::string name() const;
    // Smallest lambda at which every iterated log in the formula is >= 1.
    double threshold() const;
};

// Parses "log", "loglog", "constant", "iterlog:k=3", "logpow:p=0.5",
// "log-over-iterlog:k=2", "log-over-iterlog-pow:k=2,p=0.5".
Envelope parse_envelope(const std::string& text);

// Both throw DomainError below the threshold. The log-space form takes
// log lambda directly, which is how exact-integer frequencies enter.
double envelope_eval(const Envelope& e, double lambda);
double envelope_eval_log(const Envelope& e, double log_lambda);
double envelope_eval(const Envelope& e, const BigInt& lambda);

struct GrowthSample {
    double lambda = 0.0;
    double log_lambda = 0.0;
    std::optional<std::string> lambda_exact;  // decimal, for ladder frequencies
    cplx m{0.0, 0.0};
    double est_error = 0.0;
};

struct GrowthSeries {
    std::string class_tag;
    std::vector<GrowthSample> samples;

    void add(double lambda, cplx m, double est_error);
    void add(const BigInt& lambda, cplx m, double est_error);
};

enum class FitMode { Abs, NegRe };

struct GrowthVerdict {
    std::vector<double> envelope;
    std::vector<double> ratios;
    double min_ratio = 0.0, max_ratio = 0.0;
    double band = 0.0;  // max/min ratio over the last half
    double elasticity = 0.0;  // slope of log ratio vs log envelope, last half
    bool monotone = false;
    bool pass = false;
};

// PASS iff the last-half ratio band is <= band_limit, the fitted quantity is
// nondecreasing up to the summed error estimates, and |elasticity| <= 1/2
// (0 when the envelope is constant over the half). Throws
// InsufficientRange for fewer than 8 samples, fewer than 2 decades, or any
// sample below the envelope threshold.
GrowthVerdict fit_growth(const GrowthSeries& series, const Envelope& e, FitMode mode = FitMode::Abs,
                         double band_limit = 6.0);

struct SweepRow {
    int d = 0;
    double max_random = 0.0;  // over the random trials
    double extreme = 0.0;     // P(t) = lambda t^d
    double max_abs = 0.0;
    double ratio = 0.0;       // max_abs / log d, 0 for d = 1
};
struct SweepTable {
    std::vector<SweepRow> rows;
    double max_ratio = 0.0;
    std::uint64_t seed = 0;
    int trials = 0;
    double lambda = 0.0;
};

// Per degree: max over trials of |p.v. int_{-1}^1 e^{iP(t)} dt/t| with the
// d+1 coefficients of P drawn uniformly from [-lambda, lambda] by mt19937_64,
// next to the extreme polynomial lambda t^d. Draws are made in a fixed order
// so a seed determines the table.
SweepTable polynomial_sweep(int d_lo, int d_hi, int trials, double lambda, std::uint64_t seed,
                            const QuadratureConfig& cfg = {});

}  // namespace oscillab
