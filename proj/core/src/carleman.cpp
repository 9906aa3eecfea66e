#include "oscillab/carleman.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>
#include <json.hpp>
#include <limits>
#include <sstream>
#include <tuple>

#include "oscillab/errors.hpp"
#include "oscillab/iterlog.hpp"

namespace oscillab {
namespace {

using ojson = nlohmann::ordered_json;

constexpr std::int64_t kIndexCap = std::int64_t{1} << 62;
constexpr double kTailTol = 2e-13;
constexpr double kInf = std::numeric_limits<double>::infinity();

// L_1(x)..L_k(x); false when some iterate is not positive.
bool logs_of(double x, int k, double* L) {
    for (int j = 0; j < k; ++j) {
        if (!(x > 0.0)) return false;
        x = std::log(x);
        L[j] = x;
    }
    return true;
}

double refined_logQ(int k, double s, double x) {
    double L[8];
    if (!logs_of(x, k, L) || !(L[k - 1] > 0.0))
        throw DomainError("RefinedGevrey: iterated log not positive");
    double q = s * std::log(L[k - 1]);
    for (int j = 0; j + 1 < k; ++j) q += std::log(L[j]);
    return q;
}

// logQ(x) - logQ(x-1) through D_1 = log x - log(x-1),
// D_{j+1} = log L_j(x) - log L_j(x-1) = log1p(D_j / L_j(x-1)).
double refined_dlogQ(int k, double s, double x) {
    double Lm[8];
    if (!logs_of(x - 1.0, k, Lm)) throw DomainError("RefinedGevrey: difference below the domain");
    double D = -std::log1p(-1.0 / x);
    double out = 0.0;
    for (int j = 0; j < k; ++j) {
        D = std::log1p(D / Lm[j]);
        out += (j + 1 == k) ? s * D : D;
    }
    return out;
}

// E_j(a) - E_j(b) for a > b, built up from ab = a - b.
double iterexp_diff(int j, double a, double ab) {
    double d = ab;
    for (int i = 1; i <= j; ++i) d = iter_exp(i, a) * -std::expm1(-d);
    return d;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

CarlemanFamily CarlemanFamily::gevrey(double s) {
    if (!(s >= 1.0)) throw DomainError("Gevrey family needs s >= 1");
    CarlemanFamily M;
    M.kind_ = FamilyKind::Gevrey;
    M.s_ = s;
    return M;
}

CarlemanFamily CarlemanFamily::refined_gevrey(int k, double s) {
    if (k < 1 || !(s >= 1.0)) throw DomainError("RefinedGevrey family needs k >= 1, s >= 1");
    if (k > 2)
        throw DomainError("RefinedGevrey: start index for k >= 3 exceeds the integer range");
    CarlemanFamily M;
    M.kind_ = FamilyKind::RefinedGevrey;
    M.k_ = k;
    M.s_ = s;
    // smallest n with log^(k) n >= 2
    double threshold = iter_exp(k, 2.0);
    M.n1_ = static_cast<std::int64_t>(std::floor(threshold)) + 1;
    M.logQ1_ = refined_logQ(k, s, static_cast<double>(M.n1_));
    return M;
}

CarlemanFamily CarlemanFamily::exp_power(double c, double alpha) {
    if (!(c > 0.0) || !(alpha > 1.0)) throw DomainError("ExpPower family needs c > 0, alpha > 1");
    CarlemanFamily M;
    M.kind_ = FamilyKind::ExpPower;
    M.c_ = c;
    M.alpha_ = alpha;
    return M;
}

CarlemanFamily CarlemanFamily::iter_exp_power(int k, double c, double alpha) {
    if (k < 2 || !(c > 0.0) || !(alpha > 0.0))
        throw DomainError("IterExpPower family needs k >= 2, c > 0, alpha > 0");
    CarlemanFamily M;
    M.kind_ = FamilyKind::IterExpPower;
    M.k_ = k;
    M.c_ = c;
    M.alpha_ = alpha;
    // start of log-convexity: after the last decrease of log mu
    std::int64_t lim = M.n_limit();
    double prev = M.logmu(1);
    std::int64_t last_bad = 0;
    for (std::int64_t n = 2; n <= std::min<std::int64_t>(lim, 100000); ++n) {
        double cur = M.logmu(n);
        if (!std::isfinite(cur)) break;
        if (cur < prev) last_bad = n;
        prev = cur;
    }
    M.n1_ = last_bad == 0 ? 1 : last_bad;
    return M;
}

CarlemanFamily CarlemanFamily::tabulated(std::vector<double> logM) {
    if (logM.size() < 2) throw DomainError("Tabulated family needs at least M_0 and M_1");
    for (double v : logM)
        if (!std::isfinite(v)) throw DomainError("Tabulated family: non-finite log M_n");
    CarlemanFamily M;
    M.kind_ = FamilyKind::Tabulated;
    M.table_ = std::move(logM);
    std::int64_t last_bad = 0;
    for (std::size_t n = 2; n < M.table_.size(); ++n)
        if (M.logmu(static_cast<std::int64_t>(n)) < M.logmu(static_cast<std::int64_t>(n) - 1))
            last_bad = static_cast<std::int64_t>(n);
    M.n1_ = last_bad == 0 ? 1 : last_bad;
    return M;
}

std::string CarlemanFamily::name() const {
    switch (kind_) {
        case FamilyKind::Gevrey: return "Gevrey(s=" + fmt(s_) + ")";
        case FamilyKind::RefinedGevrey:
            return "RefinedGevrey(k=" + std::to_string(k_) + ",s=" + fmt(s_) + ")";
        case FamilyKind::ExpPower: return "ExpPower(c=" + fmt(c_) + ",alpha=" + fmt(alpha_) + ")";
        case FamilyKind::IterExpPower:
            return "IterExpPower(k=" + std::to_string(k_) + ",c=" + fmt(c_) + ",alpha=" +
                   fmt(alpha_) + ")";
        case FamilyKind::Tabulated:
            return "Tabulated(n<=" + std::to_string(table_.size() - 1) + ")";
    }
    return "?";
}

std::int64_t CarlemanFamily::n_limit() const {
    if (kind_ == FamilyKind::Tabulated) return static_cast<std::int64_t>(table_.size()) - 1;
    if (kind_ == FamilyKind::IterExpPower) {
        // log M_n = E_{k-1}(c n^alpha) must stay finite
        double a_max = k_ == 2 ? 700.0 : iter_log(k_ - 2, 700.0);
        double n = std::pow(a_max / c_, 1.0 / alpha_);
        return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::min(n, 1e15)));
    }
    return kIndexCap;
}

double CarlemanFamily::logM(std::int64_t n) const {
    if (n < 0) throw DomainError("log M_n needs n >= 0");
    double x = static_cast<double>(n);
    switch (kind_) {
        case FamilyKind::Gevrey: return s_ * std::lgamma(x + 1.0);
        case FamilyKind::RefinedGevrey:
            if (n < n1_) return std::lgamma(x + 1.0) + x * logQ1_;
            return std::lgamma(x + 1.0) + x * refined_logQ(k_, s_, x);
        case FamilyKind::ExpPower: return c_ * std::pow(x, alpha_);
        case FamilyKind::IterExpPower:
            if (n > n_limit()) throw Overflow("IterExpPower: log M_n beyond double range");
            return iter_exp(k_ - 1, c_ * std::pow(x, alpha_));
        case FamilyKind::Tabulated:
            if (n >= static_cast<std::int64_t>(table_.size()))
                throw OutOfRange("Tabulated family: n beyond the table");
            return table_[static_cast<std::size_t>(n)];
    }
    return 0.0;
}

double CarlemanFamily::logmu(std::int64_t n) const {
    if (n < 1) throw DomainError("log mu_n needs n >= 1");
    double x = static_cast<double>(n);
    switch (kind_) {
        case FamilyKind::Gevrey: return s_ * std::log(x);
        case FamilyKind::RefinedGevrey:
            if (n <= n1_) return std::log(x) + logQ1_;
            return std::log(x) + refined_logQ(k_, s_, x) + (x - 1.0) * refined_dlogQ(k_, s_, x);
        case FamilyKind::ExpPower:
            return c_ * std::pow(x, alpha_) * -std::expm1(alpha_ * std::log1p(-1.0 / x));
        case FamilyKind::IterExpPower: {
            if (n > n_limit()) return kInf;
            double a = c_ * std::pow(x, alpha_);
            double ab = a * -std::expm1(alpha_ * std::log1p(-1.0 / x));
            return iterexp_diff(k_ - 1, a, ab);
        }
        case FamilyKind::Tabulated: return logM(n) - logM(n - 1);
    }
    return 0.0;
}

double CarlemanFamily::phi(std::int64_t n) const {
    double x = static_cast<double>(n);
    switch (kind_) {
        case FamilyKind::Gevrey: return (s_ - 1.0) * std::lgamma(x + 1.0);
        case FamilyKind::RefinedGevrey:
            return n < n1_ ? x * logQ1_ : x * refined_logQ(k_, s_, x);
        default: return logM(n) - std::lgamma(x + 1.0);
    }
}

double CarlemanFamily::phi_increment(std::int64_t n) const {
    double x1 = static_cast<double>(n + 1);
    switch (kind_) {
        case FamilyKind::Gevrey: return (s_ - 1.0) * std::log(x1);
        case FamilyKind::RefinedGevrey:
            if (n + 1 <= n1_) return logQ1_;
            return refined_logQ(k_, s_, x1) + (x1 - 1.0) * refined_dlogQ(k_, s_, x1);
        default: return logmu(n + 1) - std::log(x1);
    }
}

double CarlemanFamily::logmu_cont(double x) const {
    switch (kind_) {
        case FamilyKind::Gevrey: return s_ * std::log(x);
        case FamilyKind::RefinedGevrey:
            return std::log(x) + refined_logQ(k_, s_, x) + (x - 1.0) * refined_dlogQ(k_, s_, x);
        default: throw DomainError("continuous quotient only for (refined) Gevrey families");
    }
}

namespace {

// int_a^inf dx / mu(x) for the (refined) Gevrey families, s > 1.
double tail_integral(const CarlemanFamily& M, double a) {
    const double s = M.s();
    if (M.kind() == FamilyKind::Gevrey) return std::pow(a, 1.0 - s) / (s - 1.0);
    // v = log L_k(x): dx / (x Q(x)) = e^{(1-s) v} dv, and 1/mu = e^{-corr}/(x Q)
    const int k = M.k();
    double L[8];
    logs_of(a, k, L);
    const double v_a = std::log(L[k - 1]);
    // x = E_{k+1}(v) leaves double range at L_1 = 700
    const double v_end = std::max(v_a, std::log(iter_log(k - 1, 700.0)));
    auto h = [&](double v) {
        double x = iter_exp(k + 1, v);
        double corr = (x - 1.0) * refined_dlogQ(k, s, x);
        return std::exp((1.0 - s) * v - corr);
    };
    const auto& g = gauss16();
    CompensatedSum<double> acc;
    if (v_end > v_a) {
        const int panels = 96;
        double w = (v_end - v_a) / panels;
        for (int p = 0; p < panels; ++p) {
            double c = v_a + (p + 0.5) * w;
            for (std::size_t i = 0; i < 16; ++i) acc.add(0.5 * w * g.w[i] * h(c + 0.5 * w * g.x[i]));
        }
    }
    // beyond v_end the correction is below 1e-300
    acc.add(std::exp((1.0 - s) * v_end) / (s - 1.0));
    return acc.value();
}

double inv_mu(const CarlemanFamily& M, std::int64_t j) { return std::exp(-M.logmu(j)); }

}  // namespace

namespace {

TailValue tail_uncached(const CarlemanFamily& M, std::int64_t N) {
    TailValue out;
    switch (M.kind()) {
        case FamilyKind::Tabulated:
            throw BudgetExhausted("tail of a tabulated family cannot be certified from finite data");
        case FamilyKind::Gevrey:
        case FamilyKind::RefinedGevrey: {
            if (M.s() == 1.0) {
                // 1/mu_j >= 1/(2j) eventually for s = 1: the harmonic comparison
                out.diverges = true;
                out.value = kInf;
                return out;
            }
            std::int64_t start = M.kind() == FamilyKind::RefinedGevrey ? M.n1() + 1 : 1;
            CompensatedSum<double> partial;
            std::int64_t J = N;
            for (; J < start; ++J) partial.add(inv_mu(M, J));
            std::int64_t block = 256;
            for (;;) {
                double fJ = inv_mu(M, J);
                // convex decreasing f: int_J f + f(J)/2 <= sum_{j>=J} f(j) <= int_{J-1/2} f
                double lo = tail_integral(M, static_cast<double>(J)) + 0.5 * fJ;
                double hi = tail_integral(M, static_cast<double>(J) - 0.5);
                if (hi < lo) std::swap(lo, hi);
                if (hi - lo <= kTailTol || J - N > 50'000'000) {
                    partial.add(0.5 * (lo + hi));
                    out.value = partial.value();
                    out.err = 0.5 * (hi - lo) + 1e-15 * out.value;
                    return out;
                }
                for (std::int64_t e = J + block; J < e; ++J) partial.add(inv_mu(M, J));
                block *= 2;
            }
        }
        case FamilyKind::ExpPower: {
            const double c = M.c(), a = M.alpha(), p = a - 1.0;
            CompensatedSum<double> partial;
            std::int64_t J = N;
            for (;;) {
                double lo, hi;
                if (a >= 2.0) {
                    // log mu convex: ratios mu_j / mu_{j+1} are nonincreasing
                    double fJ = inv_mu(M, J);
                    double rho = std::exp(M.logmu(J) - M.logmu(J + 1));
                    lo = fJ;
                    hi = fJ / (1.0 - rho);
                } else {
                    // c a (x-1)^p <= log mu(x) <= c a x^p
                    auto I = [&](double from) {
                        double b = c * a;
                        if (from <= 0.0) return std::tgamma(1.0 / p) / (p * std::pow(b, 1.0 / p));
                        return boost::math::tgamma(1.0 / p, b * std::pow(from, p)) /
                               (p * std::pow(b, 1.0 / p));
                    };
                    double Jd = static_cast<double>(J);
                    lo = I(Jd);
                    hi = I(Jd - 2.0);
                }
                if (hi - lo <= 1e-16 * std::max(1.0, partial.value()) || hi < 1e-300 ||
                    J - N > 50'000'000) {
                    partial.add(0.5 * (lo + hi));
                    out.value = partial.value();
                    out.err = 0.5 * (hi - lo) + 1e-15 * out.value;
                    return out;
                }
                for (int i = 0; i < 64; ++i, ++J) partial.add(inv_mu(M, J));
            }
        }
        case FamilyKind::IterExpPower: {
            CompensatedSum<double> partial;
            std::int64_t J = N;
            for (; J < M.n1(); ++J) partial.add(inv_mu(M, J));
            for (;;) {
                double lmJ = M.logmu(J), lmJ1 = M.logmu(J + 1);
                double fJ = std::exp(-lmJ);
                if (fJ == 0.0 || !std::isfinite(lmJ1)) {
                    out.value = partial.value();
                    out.err = 1e-15 * out.value + (std::isfinite(lmJ) ? fJ : 0.0);
                    return out;
                }
                double rho = std::exp(lmJ - lmJ1);
                double hi = fJ / (1.0 - rho);
                if (rho < 1.0 && hi <= 1e-17 * std::max(1.0, partial.value())) {
                    partial.add(0.5 * (fJ + hi));
                    out.value = partial.value();
                    out.err = 0.5 * (hi - fJ) + 1e-15 * out.value;
                    return out;
                }
                partial.add(fJ);
                ++J;
            }
        }
    }
    return out;
}

}  // namespace

// Index searches evaluate the same tails over and over, each a sum of up to
// ~1e5 terms, so recent values are kept per thread.
TailValue tail(const CarlemanFamily& M, std::int64_t N) {
    if (N < 1) throw DomainError("tail needs N >= 1");
    if (M.kind() == FamilyKind::Tabulated) return tail_uncached(M, N);
    using Key = std::tuple<int, int, double, double, double, std::int64_t>;
    thread_local std::map<Key, TailValue> cache;
    Key key{static_cast<int>(M.kind()), M.k(), M.s(), M.c(), M.alpha(), N};
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    TailValue v = tail_uncached(M, N);
    if (cache.size() > 4096) cache.clear();
    cache.emplace(std::move(key), v);
    return v;
}

namespace {

// Largest N with pred(T(N)) true, T decreasing; -1 when beyond the cap.
template <class Pred>
std::int64_t search_tail(const CarlemanFamily& M, Pred pred) {
    if (!pred(tail(M, 1).value)) return 0;
    std::int64_t lo = 1, hi = 2;
    const std::int64_t lim = std::min(M.n_limit(), kIndexCap);
    while (true) {
        if (hi >= lim) {
            if (pred(tail(M, lim).value)) return lim >= kIndexCap ? -1 : lim;
            hi = lim;
            break;
        }
        if (!pred(tail(M, hi).value)) break;
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (pred(tail(M, mid).value))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

// Log-space position of N with int_N^inf 1/mu = r, for indices beyond int64.
TailIndex asymptotic_index(const CarlemanFamily& M, double r) {
    TailIndex out;
    const double s = M.s();
    if (M.kind() == FamilyKind::Gevrey) {
        out.log_n = -std::log((s - 1.0) * r) / (s - 1.0);
        out.loglog_n = std::log(out.log_n);
        return out;
    }
    if (M.kind() != FamilyKind::RefinedGevrey)
        throw Overflow("inverse tail index beyond the integer range");
    // the correction is below 1e-300 there, so e^{(1-s) v}/(s-1) = r
    double v = -std::log((s - 1.0) * r) / (s - 1.0);
    const int k = M.k();
    out.loglog_n = k == 1 ? v : iter_exp(k - 1, v);
    try {
        out.log_n = iter_exp(k, v);
    } catch (const Overflow&) {
        out.log_n = kInf;
    }
    return out;
}

}  // namespace

std::int64_t inverse_tail(const CarlemanFamily& M, double r) {
    TailIndex idx = inverse_tail_index(M, r);
    if (!idx.exact) throw Overflow("inverse_tail: N_M(r) exceeds 2^62");
    return *idx.exact;
}

TailIndex inverse_tail_index(const CarlemanFamily& M, double r) {
    if (!(r > 0.0)) throw DomainError("inverse_tail needs r > 0");
    TailValue T1 = tail(M, 1);
    if (T1.diverges) throw DomainError("inverse_tail: the family is quasianalytic");
    if (r > tail(M, M.n1()).value) throw OutOfRange("inverse_tail: r exceeds T_M(n1)");
    std::int64_t N = search_tail(M, [r](double T) { return T >= r; });
    if (N < 0) return asymptotic_index(M, r);
    TailIndex out;
    out.exact = N;
    out.log_n = std::log(static_cast<double>(N));
    out.loglog_n = N > 1 ? std::log(out.log_n) : -kInf;
    return out;
}

TailIndex strict_tail_index(const CarlemanFamily& M, double r) {
    std::int64_t N = search_tail(M, [r](double T) { return T > r; });
    if (N < 0) return asymptotic_index(M, r);
    TailIndex out;
    out.exact = N;
    out.log_n = N > 0 ? std::log(static_cast<double>(N)) : -kInf;
    out.loglog_n = N > 1 ? std::log(out.log_n) : -kInf;
    return out;
}

Tristate quasianalytic(const CarlemanFamily& M) {
    if (M.kind() == FamilyKind::Tabulated) return Tristate::Unknown;
    return tail(M, std::max<std::int64_t>(1, M.n1())).diverges ? Tristate::True : Tristate::False;
}

namespace {

constexpr std::int64_t kDefaultBudget = std::int64_t{1} << 62;

// Continuous maximization of x (y - log Q(x)) in v = log x, for maximizers
// beyond int64. At the stationary point y = l(v) + l'(v) with l(v) = log Q(e^v),
// and the maximum is e^v l'(v). The integer maximum differs from it by a
// relative amount far below double resolution there.
LegendreResult legendre_asymptotic(const CarlemanFamily& M, double y) {
    const double s = M.s();
    LegendreResult out;
    out.asymptotic = true;
    if (M.kind() == FamilyKind::Gevrey) {
        // Phi(x) = (s-1) log x!: stationary at (s-1) log x = y, maximum (s-1) x
        out.log_argmax = y / (s - 1.0);
        out.log_value = std::log(s - 1.0) + out.log_argmax;
        out.value = std::exp(out.log_value);
        return out;
    }
    const int k = M.k();
    auto l_and_dl = [&](double v, double& l, double& dl) {
        double L = v, P = 1.0;
        l = 0.0;
        dl = 0.0;
        for (int j = 0; j < k; ++j) {
            if (j > 0) L = std::log(L);
            if (!(L > 0.0)) throw DomainError("legendre: iterated log not positive");
            P *= L;
            double w = (j + 1 == k) ? s : 1.0;
            l += w * std::log(L);
            dl += w / P;
        }
    };
    auto F = [&](double v) {
        double l, dl;
        l_and_dl(v, l, dl);
        return l + dl - y;
    };
    double lo = std::log(static_cast<double>(kDefaultBudget)), hi = 2.0 * lo;
    while (F(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw Overflow("legendre: maximizer beyond log-space range");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (F(mid) < 0.0 ? lo : hi) = mid;
    }
    double v = 0.5 * (lo + hi), l, dl;
    l_and_dl(v, l, dl);
    out.log_argmax = v;
    out.log_value = v + std::log(dl);
    out.value = std::exp(out.log_value);
    return out;
}

}  // namespace

LegendreResult legendre(const CarlemanFamily& M, double y, std::int64_t n_budget) {
    const std::int64_t limit = std::min(n_budget, M.n_limit());
    auto g = [&](std::int64_t n) { return static_cast<double>(n) * y - M.phi(n); };
    // brute force below the convex region, then search the sign of the
    // increment y - (Phi(n+1) - Phi(n)), which is nonincreasing
    const std::int64_t B = std::min(limit, std::max<std::int64_t>(64, M.n1()));
    std::vector<std::pair<std::int64_t, double>> cand;
    for (std::int64_t n = 1; n <= B; ++n) cand.emplace_back(n, g(n));
    if (B < limit && y - M.phi_increment(B) > 0.0) {
        std::int64_t lo = B, hi = B;
        for (;;) {
            if (hi >= limit) {
                if (y - M.phi_increment(limit) > 0.0) {
                    if (n_budget >= kDefaultBudget && (M.kind() == FamilyKind::Gevrey ||
                                                       M.kind() == FamilyKind::RefinedGevrey))
                        return legendre_asymptotic(M, y);
                    throw BudgetExhausted("legendre: no downturn before the index budget");
                }
                hi = limit;
                break;
            }
            std::int64_t next = hi > limit / 2 ? limit : hi * 2;
            if (y - M.phi_increment(next) <= 0.0) {
                hi = next;
                break;
            }
            lo = hi = next;
        }
        // increment positive at lo, nonpositive at hi
        while (hi - lo > 1) {
            std::int64_t mid = lo + (hi - lo) / 2;
            if (y - M.phi_increment(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        for (std::int64_t n = std::max(B + 1, hi - 1); n <= std::min(limit, hi + 1); ++n)
            cand.emplace_back(n, g(n));
    }
    double best = -kInf;
    for (auto& [n, v] : cand) best = std::max(best, v);
    if (!std::isfinite(best)) throw BudgetExhausted("legendre: objective not finite");
    const double tol = 1e-12 * std::max(1.0, std::abs(best));
    LegendreResult out;
    for (auto& [n, v] : cand)
        if (v >= best - tol) out.argmax.push_back(n);
    std::sort(out.argmax.begin(), out.argmax.end());
    out.argmax.erase(std::unique(out.argmax.begin(), out.argmax.end()), out.argmax.end());
    out.value = g(out.argmax.front());
    out.log_value = out.value > 0.0 ? std::log(out.value) : -kInf;
    out.log_argmax = std::log(static_cast<double>(out.argmax.front()));
    return out;
}

LogMag taylor_legendre_bound_log(const CarlemanFamily& M, double K, double t) {
    double at = std::abs(t);
    if (!(K > 0.0) || !(at > 0.0) || !(K * at <= 1.0))
        throw DomainError("taylor_legendre_bound needs 0 < |t| <= 1/K");
    LegendreResult r = legendre(M, -std::log(K * at));
    // log K is invisible next to Phi* > 2^62 on the asymptotic path
    if (r.asymptotic) return LogMag::from_loglog(r.log_value);
    return LogMag::from_log(std::log(K) - r.value);
}

double taylor_legendre_bound(const CarlemanFamily& M, double K, double t) {
    return taylor_legendre_bound_log(M, K, t).value();
}

double shellsum_upper(const CarlemanFamily& M, double lam, double c, std::int64_t N0) {
    if (!(lam >= 2.0) || !(c > 0.0) || N0 < 1) throw DomainError("shellsum_upper needs lam >= 2");
    TailValue T = tail(M, N0);
    if (T.diverges) throw DomainError("shellsum_upper: the family is quasianalytic");
    const std::int64_t N_stop =
        std::max<std::int64_t>(N0, static_cast<std::int64_t>(std::ceil(std::log2(c * lam)))) + 64;
    CompensatedSum<double> sum;
    double prev_term = 0.0, q_max = 0.0, last_w = 0.0, last_term = 0.0;
    double Tn = T.value;
    for (std::int64_t N = N0; N <= N_stop; ++N) {
        double Tn1 = tail(M, N + 1).value;
        double f = inv_mu(M, N);
        double x = f / Tn;
        double term = x < 0.5 ? -std::log1p(-x) : std::log(Tn / Tn1);
        if (!std::isfinite(term)) throw BudgetExhausted("shellsum_upper: tail underflow");
        double w = std::min(1.0, c * lam * std::ldexp(1.0, static_cast<int>(-std::min<std::int64_t>(N, 2000))));
        sum.add(w * term);
        if (N > N_stop - 16 && prev_term > 0.0) q_max = std::max(q_max, term / prev_term);
        prev_term = term;
        last_w = w;
        last_term = term;
        Tn = Tn1;
    }
    // terms grow at most by q_max per step while the weights halve
    double q = 0.5 * q_max;
    if (!(q < 0.95)) throw BudgetExhausted("shellsum_upper: no geometric remainder certificate");
    sum.add(last_w * last_term * q / (1.0 - q));
    return sum.value();
}

std::string family_to_json(const CarlemanFamily& M) {
    ojson j;
    ojson p = ojson::object();
    switch (M.kind()) {
        case FamilyKind::Gevrey:
            j["family"] = "Gevrey";
            p["s"] = M.s();
            break;
        case FamilyKind::RefinedGevrey:
            j["family"] = "RefinedGevrey";
            p["k"] = M.k();
            p["s"] = M.s();
            break;
        case FamilyKind::ExpPower:
            j["family"] = "ExpPower";
            p["c"] = M.c();
            p["alpha"] = M.alpha();
            break;
        case FamilyKind::IterExpPower:
            j["family"] = "IterExpPower";
            p["k"] = M.k();
            p["c"] = M.c();
            p["alpha"] = M.alpha();
            break;
        case FamilyKind::Tabulated: {
            j["family"] = "Tabulated";
            std::vector<double> t;
            for (std::int64_t n = 0; n <= M.n_limit(); ++n) t.push_back(M.logM(n));
            p["logM"] = t;
            break;
        }
    }
    j["params"] = p;
    return j.dump();
}

namespace {

CarlemanFamily family_from_ojson(const ojson& j) {
    const std::string f = j.at("family").get<std::string>();
    const ojson& p = j.at("params");
    auto num = [&](const char* key, double d) { return p.contains(key) ? p.at(key).get<double>() : d; };
    auto integer = [&](const char* key, int d) { return p.contains(key) ? p.at(key).get<int>() : d; };
    if (f == "Gevrey") return CarlemanFamily::gevrey(num("s", 2.0));
    if (f == "RefinedGevrey") return CarlemanFamily::refined_gevrey(integer("k", 1), num("s", 2.0));
    if (f == "ExpPower") return CarlemanFamily::exp_power(num("c", 1.0), num("alpha", 2.0));
    if (f == "IterExpPower")
        return CarlemanFamily::iter_exp_power(integer("k", 2), num("c", 1.0), num("alpha", 1.0));
    if (f == "Tabulated") return CarlemanFamily::tabulated(p.at("logM").get<std::vector<double>>());
    throw ConfigError("unknown family: " + f);
}

}  // namespace

CarlemanFamily parse_family(const std::string& text) {
    try {
        if (!text.empty() && text[0] == '{') return family_from_ojson(ojson::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("family spec: ") + e.what());
    }
    std::string head = text.substr(0, text.find(':'));
    std::string rest = text.find(':') == std::string::npos ? "" : text.substr(text.find(':') + 1);
    ojson params = ojson::object();
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("family parameter without '=': " + item);
        std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        try {
            if (key == "k")
                params[key] = std::stoi(val);
            else
                params[key] = std::stod(val);
        } catch (const std::logic_error&) {
            throw ConfigError("bad numeric value in family spec: " + item);
        }
    }
    static const std::pair<const char*, const char*> names[] = {
        {"gevrey", "Gevrey"},
        {"refined", "RefinedGevrey"},
        {"exppower", "ExpPower"},
        {"iterexp", "IterExpPower"}};
    for (auto& [shortname, full] : names) {
        if (head == shortname || head == full) {
            ojson j;
            j["family"] = full;
            j["params"] = params;
            try {
                return family_from_ojson(j);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(std::string("family spec: ") + e.what());
            }
        }
    }
    throw ConfigError("unknown family name: " + head);
}

}  // namespace oscillab
