#include "oscillab/numerics.hpp"

#include <cstdio>
#include <numbers>
#include <string>

namespace oscillab {
namespace {

template <std::size_t N>
GaussRule<N> build_rule() {
    GaussRule<N> r;
    const double pi = std::numbers::pi;
    for (std::size_t i = 0; i < N; ++i) {
        double x = std::cos(pi * (i + 0.75) / (N + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= N; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = N * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-17) break;
        }
        r.x[i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

template <class T>
T pairwise(const T* p, std::size_t n) {
    if (n <= 8) {
        T s{};
        for (std::size_t i = 0; i < n; ++i) s += p[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise(p, h) + pairwise(p + h, n - h);
}

}  // namespace

const GaussRule<16>& gauss16() {
    static const GaussRule<16> r = build_rule<16>();
    return r;
}

const GaussRule<8>& gauss8() {
    static const GaussRule<8> r = build_rule<8>();
    return r;
}

double pairwise_sum(const std::vector<double>& v) { return pairwise(v.data(), v.size()); }
cplx pairwise_sum(const std::vector<cplx>& v) { return pairwise(v.data(), v.size()); }

LogMag LogMag::from_value(double v) {
    LogMag m;
    if (v <= 0.0) return m;
    m.lv = std::log(v);
    m.llv = m.lv < 0.0 ? std::log(-m.lv) : std::numeric_limits<double>::quiet_NaN();
    return m;
}

LogMag LogMag::from_log(double lv) {
    LogMag m;
    m.lv = lv;
    if (lv == -std::numeric_limits<double>::infinity())
        m.llv = std::numeric_limits<double>::infinity();
    else
        m.llv = lv < 0.0 ? std::log(-lv) : std::numeric_limits<double>::quiet_NaN();
    return m;
}

LogMag LogMag::from_loglog(double llv) {
    LogMag m;
    m.llv = llv;
    m.lv = -std::exp(llv);
    return m;
}

bool less(const LogMag& a, const LogMag& b) {
    const double big = 1e300;
    bool a_ok = std::isfinite(a.lv) && a.lv > -big;
    bool b_ok = std::isfinite(b.lv) && b.lv > -big;
    if (a_ok && b_ok) return a.lv < b.lv;
    if (a_ok != b_ok) return b_ok;  // the one that fits in range is larger
    return a.llv > b.llv;
}

std::string format_logmag(const LogMag& m) {
    char buf[64];
    if (std::isfinite(m.lv)) {
        double l10 = m.lv / std::log(10.0);
        double e = std::floor(l10);
        double mant = std::pow(10.0, l10 - e);
        if (mant >= 9.9999995) {
            mant = 1.0;
            e += 1.0;
        }
        std::snprintf(buf, sizeof buf, "%.6fE%+.0f", mant, e);
        return buf;
    }
    if (std::isfinite(m.llv)) {
        std::snprintf(buf, sizeof buf, "exp(-exp(%.9g))", m.llv);
        return buf;
    }
    return "0";
}

double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = a > b ? a : b;
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace oscillab
