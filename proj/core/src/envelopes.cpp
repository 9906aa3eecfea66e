#include "oscillab/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "oscillab/errors.hpp"
#include "oscillab/phases.hpp"

namespace oscillab {
namespace {

// Deepest logarithm the formula takes.
int depth(const Envelope& e) {
    switch (e.kind) {
        case EnvelopeKind::Constant: return 0;
        case EnvelopeKind::Log:
        case EnvelopeKind::LogPow: return 1;
        case EnvelopeKind::LogLog: return 2;
        default: return e.k;
    }
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string Envelope::name() const {
    switch (kind) {
        case EnvelopeKind::Log: return "Log";
        case EnvelopeKind::LogOverIterLog: return "LogOverIterLog(" + std::to_string(k) + ")";
        case EnvelopeKind::LogLog: return "LogLog";
        case EnvelopeKind::IterLog: return "IterLog(" + std::to_string(k) + ")";
        case EnvelopeKind::LogPow: return "LogPow(" + num(p) + ")";
        case EnvelopeKind::LogOverIterLogPow:
            return "LogOverIterLogPow(" + std::to_string(k) + "," + num(p) + ")";
        case EnvelopeKind::Constant: return "Constant";
    }
    return "?";
}

double Envelope::threshold() const {
    int d = depth(*this);
    return d == 0 ? 0.0 : iter_exp(d, 1.0);
}

Envelope parse_envelope(const std::string& text) {
    std::string head = text, args;
    if (auto c = text.find(':'); c != std::string::npos) {
        head = text.substr(0, c);
        args = text.substr(c + 1);
    }
    int k = -1;
    double p = std::numeric_limits<double>::quiet_NaN();
    std::size_t pos = 0;
    while (pos < args.size()) {
        std::size_t end = args.find(',', pos);
        std::string kv = args.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        pos = end == std::string::npos ? args.size() : end + 1;
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("envelope argument without '=': " + kv);
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        try {
            if (key == "k")
                k = std::stoi(val);
            else if (key == "p")
                p = std::stod(val);
            else
                throw ConfigError("unknown envelope argument: " + key);
        } catch (const std::logic_error&) {
            throw ConfigError("bad envelope argument value: " + kv);
        }
    }
    auto need_k = [&] {
        if (k < 1) throw ConfigError(head + " needs k >= 1");
        return k;
    };
    auto need_p = [&] {
        if (!std::isfinite(p) || p <= 0.0) throw ConfigError(head + " needs p > 0");
        return p;
    };
    if (head == "log") return Envelope::log();
    if (head == "loglog") return Envelope::loglog();
    if (head == "constant") return Envelope::constant();
    if (head == "iterlog") return Envelope::iter_log(need_k());
    if (head == "logpow") return Envelope::log_pow(need_p());
    if (head == "log-over-iterlog") return Envelope::log_over_iter_log(need_k());
    if (head == "log-over-iterlog-pow") {
        int kk = need_k();
        return Envelope::log_over_iter_log_pow(kk, need_p());
    }
    throw ConfigError("unknown envelope: " + text);
}

double envelope_eval_log(const Envelope& e, double L) {
    if (e.kind == EnvelopeKind::Constant) return 1.0;
    // L = log lambda; the j-th iterated log of lambda is log^(j-1) L
    const int d = depth(e);
    double cur = L;
    for (int j = 1; j <= d; ++j) {
        if (j > 1) cur = std::log(cur);
        if (!(cur >= 1.0))
            throw DomainError(e.name() + ": lambda below the envelope threshold");
    }
    switch (e.kind) {
        case EnvelopeKind::Log: return L;
        case EnvelopeKind::LogLog: return std::log(L);
        case EnvelopeKind::IterLog: return cur;
        case EnvelopeKind::LogPow: return std::pow(L, e.p);
        case EnvelopeKind::LogOverIterLog: return L / cur;
        case EnvelopeKind::LogOverIterLogPow: return L / std::pow(cur, e.p);
        case EnvelopeKind::Constant: break;
    }
    return 1.0;
}

double envelope_eval(const Envelope& e, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("envelope_eval needs lambda > 0");
    return envelope_eval_log(e, std::log(lambda));
}

double envelope_eval(const Envelope& e, const BigInt& lambda) {
    if (lambda <= 0) throw DomainError("envelope_eval needs lambda > 0");
    return envelope_eval_log(e, log_big(lambda));
}

void GrowthSeries::add(double lambda, cplx m, double est_error) {
    GrowthSample s;
    s.lambda = lambda;
    s.log_lambda = std::log(lambda);
    s.m = m;
    s.est_error = est_error;
    samples.push_back(s);
}

void GrowthSeries::add(const BigInt& lambda, cplx m, double est_error) {
    GrowthSample s;
    s.log_lambda = log_big(lambda);
    s.lambda = std::exp(s.log_lambda);
    s.lambda_exact = to_decimal(lambda);
    s.m = m;
    s.est_error = est_error;
    samples.push_back(s);
}

GrowthVerdict fit_growth(const GrowthSeries& series, const Envelope& e, FitMode mode,
                         double band_limit) {
    const auto& S = series.samples;
    if (S.size() < 8) throw InsufficientRange("fit_growth needs at least 8 samples");
    for (std::size_t i = 1; i < S.size(); ++i)
        if (!(S[i].log_lambda > S[i - 1].log_lambda))
            throw InsufficientRange("fit_growth needs strictly increasing lambda");
    if (S.back().log_lambda - S.front().log_lambda < 2.0 * std::log(10.0))
        throw InsufficientRange("fit_growth needs lambda to span two decades");
    GrowthVerdict v;
    std::vector<double> y;
    for (const auto& s : S) {
        double env;
        try {
            env = envelope_eval_log(e, s.log_lambda);
        } catch (const DomainError&) {
            throw InsufficientRange("sample below the threshold of " + e.name());
        }
        double val = mode == FitMode::Abs ? std::abs(s.m) : -s.m.real();
        v.envelope.push_back(env);
        y.push_back(val);
        v.ratios.push_back(val / env);
    }
    v.min_ratio = *std::min_element(v.ratios.begin(), v.ratios.end());
    v.max_ratio = *std::max_element(v.ratios.begin(), v.ratios.end());
    const std::size_t half = S.size() / 2;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = half; i < S.size(); ++i) {
        lo = std::min(lo, v.ratios[i]);
        hi = std::max(hi, v.ratios[i]);
    }
    v.band = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    v.monotone = true;
    for (std::size_t i = 1; i < S.size(); ++i)
        if (y[i] < y[i - 1] - (S[i].est_error + S[i - 1].est_error)) v.monotone = false;
    // a wrong envelope can drift slowly enough to stay inside the band over a
    // few decades; the least-squares slope of log r against log envelope
    // exposes it (0 for a matching envelope, ~ loglog lambda for Log vs LogLog)
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, cnt = 0.0;
    for (std::size_t i = half; i < S.size(); ++i) {
        if (!(v.ratios[i] > 0.0)) continue;
        double x = std::log(v.envelope[i]), y_ = std::log(v.ratios[i]);
        sx += x;
        sy += y_;
        sxx += x * x;
        sxy += x * y_;
        cnt += 1.0;
    }
    double var = sxx - sx * sx / std::max(cnt, 1.0);
    v.elasticity = (cnt >= 2.0 && var > 1e-12) ? (sxy - sx * sy / cnt) / var : 0.0;
    v.pass = v.band <= band_limit && v.monotone && std::abs(v.elasticity) <= 0.5;
    return v;
}

SweepTable polynomial_sweep(int d_lo, int d_hi, int trials, double lambda, std::uint64_t seed,
                            const QuadratureConfig& cfg) {
    if (d_lo < 1 || d_hi > 40 || d_lo > d_hi) throw DomainError("polynomial_sweep needs 1 <= d <= 40");
    if (trials < 0 || !(lambda > 0.0)) throw DomainError("polynomial_sweep needs trials >= 0, lambda > 0");
    SweepTable out;
    out.seed = seed;
    out.trials = trials;
    out.lambda = lambda;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-lambda, lambda);
    auto abs_m = [&](std::vector<double> c) {
        return std::abs(compute_m_direct(PhaseSpec::polynomial(std::move(c)), 1.0, cfg).value);
    };
    for (int d = d_lo; d <= d_hi; ++d) {
        SweepRow row;
        row.d = d;
        for (int t = 0; t < trials; ++t) {
            std::vector<double> c(static_cast<std::size_t>(d) + 1);
            for (auto& x : c) x = coef(rng);
            row.max_random = std::max(row.max_random, abs_m(std::move(c)));
        }
        std::vector<double> ext(static_cast<std::size_t>(d) + 1, 0.0);
        ext[static_cast<std::size_t>(d)] = lambda;
        row.extreme = abs_m(std::move(ext));
        row.max_abs = std::max(row.max_random, row.extreme);
        row.ratio = d >= 2 ? row.max_abs / std::log(static_cast<double>(d)) : 0.0;
        out.max_ratio = std::max(out.max_ratio, row.ratio);
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace oscillab
