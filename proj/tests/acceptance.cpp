// Acceptance run: one PASS/FAIL line per criterion on stdout, details after
// the verdict. Exit status 1 if any criterion fails.
#include <gsl/gsl_sf_expint.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "oscillab/oscillab.hpp"

using namespace oscillab;

namespace {

const double kEuler = 0.57721566490153286061;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

std::vector<double> geom(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(i == n - 1 ? hi : lo * std::pow(hi / lo, double(i) / (n - 1)));
    return v;
}

Outcome parity() {
    OddProductLadder L = build_ladder(2, 1, 20);
    for (int n = 1; n <= 20; ++n)
        if (!verify_plateau_parity(L, n)) return {false, fmt("Q_n/Q_j not odd at n=%d", n)};
    return {true, "Q_n/Q_j odd for 1 <= j <= n <= 20, Q_20 = " + to_decimal(L.Q_at(20))};
}

Outcome plateau_sandwich() {
    OddProductLadder L = build_ladder(2, 1, 12);
    PhaseSpec p = PhaseSpec::plateau(2, 1);
    bool ok = true;
    std::string d;
    for (int n = 1; n <= 4; ++n) {
        cplx m = compute_m_direct(p, L, n).value;
        double lo = plateau_lower_bound(n), up = plateau_upper_bound(L, n);
        bool good = -m.real() >= lo - 1e-4 && std::abs(m) <= up + 1e-4;
        ok = ok && good;
        d += fmt(" n=%d: %.4f<=%.4f, |m|=%.4f<=%.4f;", n, lo, -m.real(), std::abs(m), up);
    }
    double worst = 0.0;
    for (int n = 5; n <= 12; ++n)
        worst = std::max(worst, std::abs(certified_nonneg_realpart(p, L, n) - 2.0 * n * std::log(4.0 / 3.0)));
    ok = ok && worst <= 1e-12;
    d += fmt(" certified n=5..12 max deviation %.1e", worst);
    return {ok, d};
}

Outcome power_log_law() {
    PhaseSpec p = PhaseSpec::power(1);
    bool ok = true;
    double worst_oracle = 0.0, worst_law = 0.0, worst_im = 0.0;
    for (int e = 3; e <= 9; ++e) {
        double lam = std::pow(10.0, e);
        cplx m = compute_m_direct(p, lam).value;
        cplx oracle(0.5 * (gsl_sf_Ci(lam) - kEuler - std::log(lam)), 0.5 * gsl_sf_Si(lam));
        worst_oracle = std::max(worst_oracle, std::abs(m - oracle));
        worst_law = std::max(worst_law, std::abs(m.real() + 0.5 * (std::log(lam) + kEuler)));
        if (e >= 6) worst_im = std::max(worst_im, std::abs(m.imag() - M_PI / 4.0));
    }
    ok = worst_oracle <= 1e-6 && worst_law <= 0.01 && worst_im <= 0.01;
    return {ok, fmt("max |m - CiSi| %.1e, max |Re m + (log lam + gamma)/2| %.1e, max |Im m - pi/4| (lam>=1e6) %.1e",
                    worst_oracle, worst_law, worst_im)};
}

Outcome dual_evaluator() {
    double worst = 0.0;
    for (const char* s : {"gevrey:s=2", "logpower:alpha=2"}) {
        PhaseSpec p = parse_phase(s);
        SubstitutionWeight w = matched_weight(p);
        for (double lam : {1e2, 1e3, 1e4}) {
            cplx a = compute_m_direct(p, lam).value;
            cplx b = compute_m_substituted(w, weight_prefactor(w), lam).value;
            worst = std::max(worst, std::abs(a - b));
        }
    }
    return {worst <= 1e-5, fmt("max |direct - substituted| %.1e over both pairs and 3 frequencies", worst)};
}

Outcome gevrey_loglog() {
    PhaseSpec p = PhaseSpec::gevrey(2.0);
    std::vector<double> neg, err, ratio;
    for (int e = 2; e <= 7; ++e) {
        double lam = 2.0 * M_PI * std::pow(10.0, e);
        QuadratureReport r = compute_m_direct(p, lam);
        neg.push_back(-r.value.real());
        err.push_back(r.est_error + r.truncation_bound);
        ratio.push_back(-r.value.real() / std::log(std::log(lam)));
    }
    bool mono = true;
    for (std::size_t i = 1; i < neg.size(); ++i) mono = mono && neg[i] >= neg[i - 1] - (err[i] + err[i - 1]);
    double c = *std::min_element(ratio.end() - 4, ratio.end()), C = *std::max_element(ratio.end() - 4, ratio.end());
    std::string d = fmt("ratios -Re m / log log lam:");
    for (double r : ratio) d += fmt(" %.4f", r);
    d += fmt("; band C/c over last four %.4f; nondecreasing %s", C / c, mono ? "yes" : "no");
    return {mono && C / c <= 4.0, d};
}

Outcome tail_toolkit() {
    auto G2 = CarlemanFamily::gevrey(2.0);
    double T1 = tail(G2, 1).value;
    std::int64_t N = inverse_tail(G2, 0.1);
    Tristate a = quasianalytic(CarlemanFamily::gevrey(1.0));
    Tristate b = quasianalytic(CarlemanFamily::refined_gevrey(2, 1.0));
    Tristate c = quasianalytic(CarlemanFamily::gevrey(1.5));
    bool ok = std::abs(T1 - M_PI * M_PI / 6.0) <= 1e-9 && N == 10 && a == Tristate::True && b == Tristate::True &&
              c == Tristate::False;
    auto s = [](Tristate t) { return t == Tristate::True ? "true" : t == Tristate::False ? "false" : "unknown"; };
    return {ok, fmt("T(1) - pi^2/6 = %.1e, N(0.1) = %lld, quasianalytic: Gevrey(1) %s, RefinedGevrey(2,1) %s, "
                    "Gevrey(1.5) %s",
                    T1 - M_PI * M_PI / 6.0, static_cast<long long>(N), s(a), s(b), s(c))};
}

Outcome legendre_exact() {
    auto M = CarlemanFamily::gevrey(2.0);
    const double y = std::log(10.0);
    LegendreResult r = legendre(M, y);
    double best = -INFINITY;
    std::vector<std::int64_t> at;
    for (std::int64_t n = 1; n <= 10000; ++n) {
        double f = static_cast<double>(n) * y - std::lgamma(static_cast<double>(n) + 1.0);
        if (at.empty() || f > best + 1e-12) {
            best = f;
            at = {n};
        } else if (std::abs(f - best) <= 1e-12) {
            at.push_back(n);
        }
    }
    double closed = 10.0 * y - std::lgamma(11.0);
    bool ok = std::abs(r.value - closed) <= 1e-12 && std::abs(best - closed) <= 1e-12 &&
              r.argmax == std::vector<std::int64_t>{9, 10} && at == r.argmax;
    return {ok, fmt("Phi*(log 10) = %.15f, closed form %.15f, brute force %.15f, argmax {%lld,%lld}", r.value, closed,
                    best, static_cast<long long>(r.argmax.front()), static_cast<long long>(r.argmax.back()))};
}

Outcome bang_domination() {
    auto M = CarlemanFamily::gevrey(2.0);
    PhaseSpec p = PhaseSpec::gevrey(2.0);
    MembershipReport mem = verify_membership(p, M, 0, 12, geom(0.005, 1.0, 400));
    auto grid = geom(0.02, 0.5, 256);
    CompareTable tab;
    try {
        tab = compare_methods(M, mem.K_hat, mem.stable, p, grid);
    } catch (const Error& e) {
        return {false, fmt("K = %.4f: %s", mem.K_hat, e.what())};
    }
    auto logA = bang_sequence(M, mem.K_hat, 4000);
    int checked = 0;
    double margin = INFINITY;
    for (int i = 0; i < 20; ++i) {
        double x = grid[static_cast<std::size_t>(i * 255 / 19)];
        BangLevel lvl = bang_level(M, mem.K_hat, x);
        int ell = static_cast<int>(*lvl.index.exact);
        ChainResult c = bang_chain_oracle(logA, x, ell);
        double packaged = logA[0] - ell * std::log(2.0);
        margin = std::min(margin, packaged - c.log_bound);
        if (c.log_bound <= packaged + 1e-9) ++checked;
    }
    bool ok = tab.rows.size() == 256 && checked == 20;
    return {ok, fmt("K = %.4f (stable %s); |phi| below both bounds at %zu/256 points; chain <= A0 2^-l at %d/20 "
                    "pairs, min log margin %.3g",
                    mem.K_hat, mem.stable ? "yes" : "no", tab.rows.size(), checked, margin)};
}

Outcome method_ordering() {
    // LogPower(2) against exp(n^2/2)
    auto Mlp = CarlemanFamily::exp_power(0.5, 2.0);
    PhaseSpec lp = PhaseSpec::log_power(2.0);
    MembershipReport m1 = verify_membership(lp, Mlp, 0, 12, geom(1e-6, lp.domain_radius(), 400));
    CompareTable t1 = compare_methods(Mlp, m1.K_hat, m1.stable, lp, geom(1e-4, lp.domain_radius(), 64));
    double ts1 = 0;
    int run1 = ordering_prefix(t1, "taylor_legendre", ts1);

    // IteratedExpFlat(2,2) against the refined Gevrey weight
    auto Mie = CarlemanFamily::refined_gevrey(2, 2.0);
    PhaseSpec ie = PhaseSpec::iterated_exp(2, 2.0);
    MembershipReport m2 = verify_membership(ie, Mie, 0, 30, geom(0.1, 1.0, 200));
    auto grid2 = geom(0.01, 0.5, 64);
    CompareTable t2 = rank_bounds(Mie, m2.K_hat, grid2);
    double ts2 = 0;
    int run2 = ordering_prefix(t2, "bang", ts2);
    std::string dom = "dominated";
    try {
        compare_methods(Mie, m2.K_hat, m2.stable, ie, grid2);
    } catch (const ClassMismatch&) {
        dom = "not dominated (K below the true class constant)";
    }
    bool ok = m1.stable && run1 >= 10 && run2 >= 10;
    return {ok, fmt("LogPower(2): taylor_legendre tighter on %d consecutive points, t* = %.4g, K = %.4f; "
                    "IteratedExpFlat(2,2): bang tighter on %d consecutive points, t* = %.4g, K = %.4f, |phi| %s",
                    run1, ts1, m1.K_hat, run2, ts2, m2.K_hat, dom.c_str())};
}

Outcome derivative_triangle() {
    LogDerivTriangle T = build_triangle(40);
    BigInt f = 1;
    bool tri = true;
    for (int n = 1; n <= 40; ++n) {
        f *= n;
        tri = tri && T.abs_row_sum(n) <= f;
    }
    auto B = bell_numbers(20);
    bool bell = true;
    for (int k = 1; k <= 20; ++k) bell = bell && B[k] <= boost::multiprecision::pow(BigInt(k), k);
    double worst = 0.0;
    PhaseSpec p = PhaseSpec::log_power(2.0);
    for (double t : {0.1, 0.2, 0.3})
        for (int n = 1; n <= 8; ++n) worst = std::max(worst, two_path_derivative(p, t, n).rel_error);
    return {tri && bell && worst <= 1e-6,
            fmt("row sums <= n! for n <= 40: %s; B_k <= k^k for k <= 20: %s; two-path max rel error %.1e",
                tri ? "yes" : "no", bell ? "yes" : "no", worst)};
}

Outcome membership() {
    PhaseSpec p = PhaseSpec::gevrey(2.0);
    auto grid = geom(0.005, 1.0, 400);
    MembershipReport a = verify_membership(p, CarlemanFamily::gevrey(2.0), 0, 12, grid);
    MembershipReport b = verify_membership(p, CarlemanFamily::gevrey(1.0), 0, 12, grid);
    double k6 = 0, k12 = 0;
    for (const auto& r : b.rows) {
        if (r.n == 6) k6 = r.K_hat;
        if (r.n == 12) k12 = r.K_hat;
    }
    bool ok = a.stable && a.K_hat <= 10.0 && k12 >= 2.0 * k6;
    return {ok, fmt("Gevrey(2): K_hat %.4f stable %s; Gevrey(1): K_hat_6 %.4f -> K_hat_12 %.4f (x%.3f)", a.K_hat,
                    a.stable ? "yes" : "no", k6, k12, k12 / k6)};
}

Outcome vdc() {
    VdcCheck r = vdc_check(parse_phase("poly:c=0;0;0;1"), 1e4, {1e5, 1e6});
    double worst = 0.0;
    for (const auto& row : r.rows) worst = std::max(worst, row.ratio);
    return {r.pass && r.C <= 10.0,
            fmt("k = %d, fitted max ratio %.3f, C = %.3f, max check ratio %.3f over %zu shells", r.k, r.max_fit_ratio,
                r.C, worst, r.rows.size())};
}

Outcome hierarchy() {
    const Envelope order[] = {Envelope::constant(),  Envelope::iter_log(3),          Envelope::loglog(),
                              Envelope::log_pow(0.5), Envelope::log_over_iter_log(2), Envelope::log()};
    bool ok = true;
    std::string d;
    double prev = -INFINITY;
    for (const auto& e : order) {
        double v = envelope_eval(e, 1e8);
        ok = ok && v > prev;
        prev = v;
        d += fmt("%s%s %.4f", d.empty() ? "" : " < ", e.name().c_str(), v);
    }
    return {ok, d};
}

Outcome poly_sweep() {
    SweepTable t = polynomial_sweep(1, 40, 200, 100.0, 1);
    double worst_excess = -INFINITY;
    for (const auto& r : t.rows) worst_excess = std::max(worst_excess, r.max_abs - (3.0 * std::log(r.d) + 10.0));
    bool ok = t.max_ratio <= 20.0 && worst_excess <= 0.0;
    return {ok, fmt("max_d max|m|/log d = %.3f, max over d of (max|m| - 3 log d - 10) = %.3f, seed 1, scale 100",
                    t.max_ratio, worst_excess)};
}

}  // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"plateau parity", parity},
        {"plateau sandwich", plateau_sandwich},
        {"power-phase log law", power_log_law},
        {"dual evaluator agreement", dual_evaluator},
        {"Gevrey log-log growth", gevrey_loglog},
        {"tail toolkit", tail_toolkit},
        {"Legendre exactness", legendre_exact},
        {"Bang domination", bang_domination},
        {"method ordering", method_ordering},
        {"derivative triangle", derivative_triangle},
        {"class membership", membership},
        {"van der Corput shells", vdc},
        {"envelope hierarchy", hierarchy},
        {"polynomial sweep", poly_sweep},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::printf("%2zu %s %s (%.1f s): %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, secs,
                    o.detail.c_str());
    }
    return failed ? 1 : 0;
}
