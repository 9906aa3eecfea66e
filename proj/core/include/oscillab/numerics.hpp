#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace oscillab {

using cplx = std::complex<double>;

// Gauss-Legendre rule on [-1, 1].
template <std::size_t N>
struct GaussRule {
    std::array<double, N> x{};
    std::array<double, N> w{};
};

const GaussRule<16>& gauss16();
const GaussRule<8>& gauss8();

// Neumaier compensated accumulator; order-dependent but deterministic.
template <class T>
class CompensatedSum {
public:
    void add(T v) {
        T t = sum_ + v;
        comp_ += compensation(sum_, v, t);
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    static double compensation(double s, double v, double t) {
        return std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    }
    static cplx compensation(cplx s, cplx v, cplx t) {
        return {compensation(s.real(), v.real(), t.real()),
                compensation(s.imag(), v.imag(), t.imag())};
    }
    T sum_{};
    T comp_{};
};

double pairwise_sum(const std::vector<double>& v);
cplx pairwise_sum(const std::vector<cplx>& v);

// A positive magnitude that may lie far below double range. lv = log v and,
// for v < 1, llv = log(-log v). Either field may be the only finite one.
struct LogMag {
    double lv = -std::numeric_limits<double>::infinity();
    double llv = std::numeric_limits<double>::infinity();

    static LogMag from_value(double v);
    static LogMag from_log(double lv);
    static LogMag from_loglog(double llv);

    // Usable as a double; 0 when below range.
    double value() const { return std::exp(lv); }
    // log10 of the magnitude, -inf when only llv is known and it overflows.
    double log10() const { return lv / std::log(10.0); }
};

// Strict ordering of magnitudes; falls back to llv when lv is not usable.
bool less(const LogMag& a, const LogMag& b);
inline bool less_equal(const LogMag& a, const LogMag& b) { return !less(b, a); }

// Decimal rendering m.mmmmmmE-xxxx that survives underflow.
std::string format_logmag(const LogMag& m);

// log(exp(a) + exp(b)).
double log_add(double a, double b);

}  // namespace oscillab
