#include "oscillab/derivlab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oscillab/errors.hpp"
#include "oscillab/iterlog.hpp"

namespace oscillab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMinNodes = 64;
constexpr int kMaxNodes = 1 << 16;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// exp(z) - 1 without cancellation for small |z|.
cplx expm1c(cplx z) {
    double x = z.real(), y = z.imag();
    double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// log(1 + w); the series keeps full relative accuracy for tiny |w|.
cplx log1pc(cplx w) {
    if (std::abs(w) < 1e-4) return w * (1.0 - w * (0.5 - w * (1.0 / 3.0 - 0.25 * w)));
    return std::log(1.0 + w);
}

cplx iter_log_c(int k, cplx w) {
    for (int j = 0; j < k; ++j) w = std::log(w);
    return w;
}

struct CauchyValue {
    SignedLog v;
    bool noise = false;  // coefficient at roundoff level of the node sum
};

// f^(n)(x0) / f(x0) for f given through rho(dz) = log f(x0 + dz) - log f(x0).
template <class Rho>
CauchyValue cauchy_once(Rho rho, int n, double r) {
    std::vector<cplx> d;
    double c_prev = 0.0, S_prev = 0.0;
    for (int N = kMinNodes; N <= kMaxNodes; N *= 2) {
        d.resize(static_cast<std::size_t>(N));
        double S = -kInf;
        for (int k = 0; k < N; ++k) {
            double th = 2.0 * std::numbers::pi * k / N;
            d[k] = rho(std::polar(r, th));
            if (std::isnan(d[k].real())) throw NoConvergence("contour: phase not finite on the circle");
            S = std::max(S, d[k].real());
        }
        if (S == -kInf) return {};
        CompensatedSum<double> sum, mass;
        for (int k = 0; k < N; ++k) {
            double th = 2.0 * std::numbers::pi * k / N;
            cplx v = std::exp(d[k] - S);
            sum.add((v * std::polar(1.0, -n * th)).real());
            mass.add(std::abs(v));
        }
        double c = sum.value() / N;
        double m = mass.value() / N;
        if (N > kMinNodes) {
            double prev = c_prev * std::exp(S_prev - S);
            bool settled = std::abs(c - prev) <= 1e-8 * std::abs(c) + 1e-15 * m;
            bool noise = std::abs(c) <= 1e-11 * m && std::abs(prev) <= 1e-11 * m;
            if (settled || noise) {
                CauchyValue out;
                out.noise = noise;
                if (c == 0.0) return out;
                out.v.sign = c > 0.0 ? 1 : -1;
                out.v.log_abs = S + std::log(std::abs(c)) + std::lgamma(n + 1.0) - n * std::log(r);
                return out;
            }
        }
        c_prev = c;
        S_prev = S;
    }
    throw NoConvergence("contour derivative did not settle within 65536 nodes");
}

// A circle that reaches where |f| dwarfs |f(x0)| leaves the coefficient at
// roundoff level of the node sum; shrink until it isn't. A genuinely
// vanishing derivative stays at noise level and is returned as such.
template <class Rho>
CauchyValue cauchy(Rho rho, int n, double r) {
    CauchyValue cv;
    for (int attempt = 0; attempt < 8; ++attempt, r *= 0.5) {
        cv = cauchy_once(rho, n, r);
        if (!cv.noise) break;
    }
    return cv;
}

bool is_polynomial(const PhaseSpec& spec) {
    return std::holds_alternative<Polynomial>(spec.variant());
}

// log psi(t + dz) - log psi(t), arranged to avoid cancellation for the
// exponential-type variants.
struct PhaseRho {
    const PhaseSpec& spec;
    double t;
    cplx base;

    cplx operator()(cplx dz) const {
        cplx lz = log1pc(dz / t);
        return std::visit(
            overloaded{
                [&](const PowerPhase& p) -> cplx { return (p.alpha + 1.0) * lz; },
                [&](const GevreyFlat& p) -> cplx {
                    double a = 1.0 / (p.s - 1.0);
                    return -std::pow(t, -a) * expm1c(-a * lz);
                },
                [&](const IteratedExpFlat& p) -> cplx {
                    double a = 1.0 / (p.s - 1.0);
                    double L = std::pow(t, -a);  // E_0 at the center
                    cplx d = L * expm1c(-a * lz);
                    for (int j = 1; j <= p.k; ++j) {
                        cplx e = expm1c(d);
                        d = e == cplx(0.0) ? cplx(0.0) : std::exp(L + std::log(e));
                        L = std::exp(L);
                    }
                    return -d;
                },
                [&](const Polynomial&) -> cplx { return std::log(eval_phase_complex(spec, t + dz)); },
                [&](const auto&) -> cplx { return log_phase_complex(spec, t + dz) - base; }},
            spec.variant());
    }
};

// Both log psi(t) and its elasticity inside double range.
bool representable(const PhaseSpec& spec, double t) {
    if (is_polynomial(spec)) return true;
    return std::isfinite(log_phase(spec, t).lv) && std::isfinite(phase_elasticity(spec, t));
}

// Saddle radius: minimizes log max_circle |psi| - n log r, which is convex
// in log r (three-circles), so a golden-section search suffices. The
// maximum is sampled on 64 nodes; a missed spike shows up as a noise-level
// coefficient and is handled by the shrinking retry in cauchy().
double auto_radius(const PhaseSpec& spec, double t, int n) {
    if (is_polynomial(spec)) return 1.0;
    const double top = std::log(0.95 * t);
    if (n == 0) return 0.4 * t;
    PhaseRho rho{spec, t, log_phase_complex(spec, cplx(t, 0.0))};
    auto h = [&](double lr) {
        double r = std::exp(lr), mx = -kInf;
        for (int k = 0; k < 64; ++k) {
            double v = rho(std::polar(r, 2.0 * std::numbers::pi * k / 64)).real();
            if (!std::isfinite(v) && !(v == -kInf)) return kInf;
            mx = std::max(mx, v);
        }
        return mx - n * lr;
    };
    // bracket around the elasticity scale n t / D, where log psi moves by ~n
    double lr0 = std::min(top, std::log(std::max(n, 1) * t / phase_elasticity(spec, t)));
    double a = lr0 - 20.0, b = top;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = h(x1), f2 = h(x2);
    for (int it = 0; it < 90 && b - a > 1e-2; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = h(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = h(x2);
        }
    }
    return std::exp(0.5 * (a + b));
}

// psi^(n)(t)/psi(t) (polynomials: psi^(n)(t) itself).
CauchyValue contour_relative(const PhaseSpec& spec, double t, int n, double r) {
    if (n < 0 || n > 30) throw DomainError("contour_derivative: n must lie in [0, 30]");
    if (std::holds_alternative<PlateauPhase>(spec.variant()))
        throw DomainError("contour_derivative: PlateauPhase is not analytic");
    bool poly = is_polynomial(spec);
    if (!poly && !(t > 0.0)) throw DomainError("contour_derivative: t must be positive");
    if (!poly && !(r < t)) throw DomainError("contour_derivative: radius reaches the singularity at 0");
    if (!(r > 0.0)) throw DomainError("contour_derivative: radius must be positive");
    PhaseRho rho{spec, t, poly ? cplx(0.0) : log_phase_complex(spec, cplx(t, 0.0))};
    return cauchy(rho, n, r);
}

double falling(double b, int m) {
    double v = 1.0;
    for (int i = 0; i < m; ++i) v *= b - i;
    return v;
}

// Complete Bell polynomials Y_0..Y_n of h[1..n].
std::vector<double> bell_polys(const std::vector<double>& h, int n) {
    std::vector<double> Y(static_cast<std::size_t>(n) + 1, 0.0);
    Y[0] = 1.0;
    for (int k = 0; k < n; ++k) {
        double s = 0.0, binom = 1.0;
        for (int i = 0; i <= k; ++i) {
            s += binom * Y[k - i] * h[i + 1];
            binom = binom * (k - i) / (i + 1);
        }
        Y[k + 1] = s;
    }
    return Y;
}

cplx intermediate_Q_c(int k, double alpha, cplx w) {
    return w * std::pow(iter_log_c(k - 1, w), 1.0 / alpha);
}

// g^(r)(u)/g(u) for g = exp(-Q).
SignedLog intermediate_g_ratio(int k, double alpha, double u, int r) {
    double sing = k >= 2 ? (k == 2 ? 0.0 : iter_exp(k - 2, 0.0)) : 0.0;
    double ru = std::min(0.4 * (u - sing), std::max(r, 1) / intermediate_Qprime(k, alpha, u));
    if (!(ru > 0.0)) throw DomainError("Intermediate: u below the analytic region");
    cplx Qu = intermediate_Q_c(k, alpha, cplx(u, 0.0));
    return cauchy([&](cplx du) { return -(intermediate_Q_c(k, alpha, u + du) - Qu); }, r, ru).v;
}

double signed_value(const SignedLog& s) { return s.sign * std::exp(s.log_abs); }

}  // namespace

double SignedLog::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

BigInt LogDerivTriangle::abs_row_sum(int n) const {
    BigInt s = 0;
    for (int k = 1; k <= n; ++k) s += abs(at(n, k));
    return s;
}

LogDerivTriangle build_triangle(int n_max) {
    if (n_max < 1) throw DomainError("build_triangle: n_max must be >= 1");
    LogDerivTriangle T;
    T.n_max = n_max;
    T.a.assign(static_cast<std::size_t>(n_max) + 1, {});
    for (int n = 1; n <= n_max; ++n) T.a[n].assign(static_cast<std::size_t>(n) + 1, BigInt(0));
    T.a[1][1] = -1;
    for (int n = 1; n < n_max; ++n)
        for (int k = 1; k <= n + 1; ++k) {
            BigInt same = k <= n ? T.a[n][k] : BigInt(0);
            BigInt lower = k >= 2 ? T.a[n][k - 1] : BigInt(0);
            T.a[n + 1][k] = -(n * same + lower);
        }
    return T;
}

ContourDerivative contour_derivative(const PhaseSpec& spec, double t, int n, double radius) {
    ContourDerivative out;
    bool poly = is_polynomial(spec);
    if (n == 0) {
        if (poly) {
            double v = eval_phase(spec, t);
            out.d.sign = v > 0 ? 1 : (v < 0 ? -1 : 0);
            out.d.log_abs = std::log(std::abs(v));
        } else {
            out.d.log_abs = log_phase(spec, t).lv;
            out.d.sign = std::isfinite(out.d.log_abs) ? 1 : 0;
        }
        return out;
    }
    if (!representable(spec, t)) return out;  // psi(t) below log-space range
    out.radius = radius > 0.0 ? radius : auto_radius(spec, t, n);
    double base = poly ? 0.0 : log_phase(spec, t).lv;
    CauchyValue rel = contour_relative(spec, t, n, out.radius);
    out.d = rel.v;
    out.precise = !rel.noise;
    if (out.d.sign != 0) out.d.log_abs += base;
    return out;
}

double closed_form_derivative(const PhaseSpec& spec, double t, int n) {
    if (auto* g = std::get_if<GevreyFlat>(&spec.variant())) {
        if (g->s != 2.0) throw DomainError("closed_form_derivative: GevreyFlat needs s = 2");
        if (!(t > 0.0)) return 0.0;
        // psi^(n) = e^{-x} P_n(x), x = 1/t, P_{n+1} = x^2 (P_n - P_n')
        std::vector<double> P{1.0};
        for (int i = 0; i < n; ++i) {
            std::vector<double> next(P.size() + 2, 0.0);
            for (std::size_t j = 0; j < P.size(); ++j) {
                next[j + 2] += P[j];
                if (j >= 1) next[j + 1] -= j * P[j];
            }
            P = std::move(next);
        }
        double x = 1.0 / t, v = 0.0;
        for (auto it = P.rbegin(); it != P.rend(); ++it) v = v * x + *it;
        return std::exp(-x) * v;
    }
    if (auto* p = std::get_if<PowerPhase>(&spec.variant())) {
        if (!(t > 0.0)) return 0.0;
        int e = p->alpha + 1;
        if (n > e) return 0.0;
        return falling(e, n) * std::pow(t, e - n);
    }
    throw DomainError("closed_form_derivative: no closed form for " + spec.name());
}

TwoPathResult two_path_derivative(const PhaseSpec& spec, double t, int n) {
    TwoPathResult out;
    if (n == 0) {
        out.triangle = out.contour = 1.0;
        return out;
    }
    const double u = -std::log(t);
    std::vector<double> gk(static_cast<std::size_t>(n) + 1, 0.0);
    if (auto* lp = std::get_if<LogPower>(&spec.variant())) {
        double b = lp->alpha / (lp->alpha - 1.0);
        std::vector<double> h(static_cast<std::size_t>(n) + 1, 0.0);
        for (int m = 1; m <= n; ++m) h[m] = -falling(b, m) * std::pow(u, b - m);
        gk = bell_polys(h, n);
    } else if (auto* im = std::get_if<Intermediate>(&spec.variant())) {
        log_phase(spec, t);  // domain guard
        for (int j = 1; j <= n; ++j) gk[j] = signed_value(intermediate_g_ratio(im->k, im->alpha, u, j));
    } else {
        throw DomainError("two_path_derivative: needs LogPower or Intermediate");
    }
    LogDerivTriangle T = build_triangle(n);
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += T.at(n, k).convert_to<double>() * gk[k];
    out.triangle = s * std::pow(t, -n);
    out.contour = signed_value(contour_relative(spec, t, n, auto_radius(spec, t, n)).v);
    double scale = std::max({std::abs(out.triangle), std::abs(out.contour), 1e-300});
    out.rel_error = std::abs(out.triangle - out.contour) / scale;
    return out;
}

MembershipReport verify_membership(const PhaseSpec& spec, const CarlemanFamily& M, int n_lo,
                                   int n_hi, const std::vector<double>& t_grid) {
    if (n_lo < 0 || n_hi > 30 || n_lo > n_hi) throw DomainError("verify_membership: n range outside [0, 30]");
    if (t_grid.empty()) throw DomainError("verify_membership: empty grid");
    MembershipReport rep;
    std::vector<double> ts;
    for (double t : t_grid) {
        if (!(t > 0.0) || t > spec.domain_radius() * (1.0 + 1e-12))
            throw DomainError("verify_membership: grid point outside (0, domain_radius]");
        if (!representable(spec, t))
            ++rep.skipped_points;
        else
            ts.push_back(t);
    }
    if (ts.empty()) throw DomainError("verify_membership: psi underflows on the whole grid");
    for (int n = n_lo; n <= n_hi; ++n) {
        MembershipRow row;
        row.n = n;
        row.sup_log = -kInf;
        for (double t : ts) {
            ContourDerivative cd = contour_derivative(spec, t, n);
            if (!cd.precise) {
                ++rep.imprecise_values;
                continue;
            }
            double v = cd.d.log_abs;
            if (v > row.sup_log) {
                row.sup_log = v;
                row.argsup = t;
            }
        }
        row.logM = M.logM(n);
        row.K_hat = std::exp((row.sup_log - row.logM) / (n + 1));
        rep.K_hat = std::max(rep.K_hat, row.K_hat);
        rep.rows.push_back(row);
    }
    // stable: the last five K_hat_n sit within 20% of each other or no longer
    // increase, so the maximum already bounds the tail
    std::size_t w = std::min<std::size_t>(5, rep.rows.size());
    double lo = kInf, hi = 0.0;
    bool nonincreasing = true;
    for (std::size_t i = rep.rows.size() - w; i < rep.rows.size(); ++i) {
        lo = std::min(lo, rep.rows[i].K_hat);
        hi = std::max(hi, rep.rows[i].K_hat);
        if (i > rep.rows.size() - w && rep.rows[i].K_hat > rep.rows[i - 1].K_hat * (1.0 + 1e-9))
            nonincreasing = false;
    }
    rep.stable = lo > 0.0 && (hi <= 1.2 * lo || nonincreasing);
    return rep;
}

GkReport gk_bound_check(double beta, int k_lo, int k_hi, const std::vector<double>& u_grid) {
    if (!(beta > 1.0)) throw DomainError("gk_bound_check: beta must exceed 1");
    if (k_lo < 1 || k_hi > 15 || k_lo > k_hi) throw DomainError("gk_bound_check: k range outside [1, 15]");
    GkReport rep;
    for (int k = k_lo; k <= k_hi; ++k) {
        GkRow row;
        row.k = k;
        for (double u : u_grid) {
            if (!(u >= 1.0)) throw DomainError("gk_bound_check: grid needs u >= 1");
            double ub = std::pow(u, beta);
            double r = std::min(0.5 * u, std::max(k, 1) / (beta * std::pow(u, beta - 1.0)));
            SignedLog g = cauchy(
                [&](cplx du) { return -ub * expm1c(beta * log1pc(du / u)); }, k, r).v;
            if (g.sign == 0) continue;
            double lc = (g.log_abs - std::lgamma(k + 1.0) - k * std::log(double(k)) -
                         (beta - 1.0) * k * std::log(u)) / k;
            double c0 = std::exp(lc);
            if (c0 > row.C0) {
                row.C0 = c0;
                row.worst_u = u;
            }
        }
        rep.C0 = std::max(rep.C0, row.C0);
        rep.rows.push_back(row);
    }
    rep.pass = std::isfinite(rep.C0) && rep.C0 <= 100.0;
    return rep;
}

std::vector<BigInt> bell_numbers(int k_max) {
    if (k_max < 0 || k_max > 25) throw DomainError("bell_numbers: k_max must lie in [0, 25]");
    std::vector<BigInt> B{1};
    std::vector<BigInt> row{1};
    for (int n = 1; n <= k_max; ++n) {
        std::vector<BigInt> next{row.back()};
        for (const BigInt& x : row) next.push_back(next.back() + x);
        row = std::move(next);
        B.push_back(row.front());
    }
    for (int k = 1; k <= k_max; ++k)
        if (B[k] > boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(k)))
            throw MismatchError("bell_numbers: B_k exceeds k^k at k = " + std::to_string(k));
    return B;
}

AqReport AQ_check(int k, double alpha, const std::vector<double>& u_grid) {
    if (k < 2 || k > 6) throw DomainError("AQ_check: k must lie in [2, 6]");
    if (!(alpha > 0.0)) throw DomainError("AQ_check: alpha must be positive");
    std::vector<double> us(u_grid);
    std::sort(us.begin(), us.end());
    AqReport rep;
    rep.pass = true;
    for (double u : us) {
        if (!(iter_log(k - 1, u) >= 2.0)) throw DomainError("AQ_check: needs L_{k-1}(u) >= 2");
        AqRow row;
        row.u = u;
        double h = 1e-20 * u;
        row.Qprime = intermediate_Q_c(k, alpha, cplx(u, h)).imag() / h;
        double prod = 1.0, L = u;
        for (int j = 1; j <= k - 1; ++j) {
            L = std::log(L);
            prod *= L;
        }
        double A = std::pow(L, 1.0 / alpha);
        row.identity = A * (1.0 + 1.0 / (alpha * prod));
        row.rel_error = std::abs(row.Qprime - row.identity) / std::abs(row.identity);
        row.correction = row.Qprime / A;
        if (row.rel_error > 1e-10) rep.pass = false;
        if (!rep.rows.empty() && row.correction > rep.rows.back().correction * (1.0 + 1e-12))
            rep.pass = false;
        rep.rows.push_back(row);
    }
    return rep;
}

EkReport ek_bound_check(int k_max, int r_max, const std::vector<double>& x_grid) {
    if (k_max < 1 || k_max > 3) throw DomainError("ek_bound_check: k_max must lie in [1, 3]");
    if (r_max < 0 || r_max > 12) throw DomainError("ek_bound_check: r_max must lie in [0, 12]");
    EkReport rep;
    rep.pass = true;
    rep.fitted_A.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
    for (double x : x_grid) {
        if (!(x >= 1.0)) throw DomainError("ek_bound_check: needs x >= 1");
        std::vector<double> E{x};
        for (int j = 1; j <= k_max; ++j) E.push_back(std::exp(E.back()));
        // D[r] = E_k^(r) / E_k
        std::vector<double> D(static_cast<std::size_t>(r_max) + 1, 1.0);
        double A = 1.0, Mk = 1.0;
        for (int k = 1; k <= k_max; ++k) {
            if (k >= 2) {
                std::vector<double> h(static_cast<std::size_t>(r_max) + 1, 0.0);
                for (int m = 1; m <= r_max; ++m) h[m] = E[k - 1] * D[m];
                D = bell_polys(h, r_max);
                A *= 2.0 * std::numbers::e;
                Mk *= E[k - 1];
            }
            for (int r = 0; r <= r_max; ++r) {
                EkRow row{k, r, x, D[r], std::tgamma(r + 1.0) * std::pow(A * Mk, r)};
                if (row.ratio > row.bound * (1.0 + 1e-12)) rep.pass = false;
                if (r >= 1)
                    rep.fitted_A[k] = std::max(
                        rep.fitted_A[k], std::pow(row.ratio / std::tgamma(r + 1.0), 1.0 / r) / Mk);
                rep.rows.push_back(row);
            }
        }
    }
    return rep;
}

GReport g_bound_check(int k, double alpha, int r_max, const std::vector<double>& u_grid) {
    if (k < 2) throw DomainError("g_bound_check: k must be >= 2");
    if (r_max < 1 || r_max > 15) throw DomainError("g_bound_check: r_max must lie in [1, 15]");
    GReport rep;
    for (int r = 1; r <= r_max; ++r) {
        GRow row;
        row.r = r;
        for (double u : u_grid) {
            double L = iter_log(k - 1, u);
            if (!(L > 1.0)) throw DomainError("g_bound_check: needs L_{k-1}(u) > 1");
            SignedLog g = intermediate_g_ratio(k, alpha, u, r);
            if (g.sign == 0) continue;
            double logA = std::log(L) / alpha;
            double c = std::exp((g.log_abs - 2.0 * std::lgamma(r + 1.0) - r * logA) / r);
            if (c > row.C) {
                row.C = c;
                row.worst_u = u;
            }
        }
        rep.rows.push_back(row);
    }
    // bounded in r: the second half never exceeds 1.5x the first half
    double first = 0.0, second = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        finite = finite && std::isfinite(rep.rows[i].C);
        (2 * i < rep.rows.size() ? first : second) =
            std::max(2 * i < rep.rows.size() ? first : second, rep.rows[i].C);
    }
    rep.pass = finite && second <= 1.5 * first;
    return rep;
}

namespace {

// log psi(e^-u) for the analytic flat variants.
double log_psi_u(const PhaseSpec& spec, double u) {
    if (auto* g = std::get_if<GevreyFlat>(&spec.variant())) return -std::exp(u / (g->s - 1.0));
    if (auto* ie = std::get_if<IteratedExpFlat>(&spec.variant())) {
        double x = std::exp(u / (ie->s - 1.0));
        for (int j = 0; j < ie->k; ++j) x = std::exp(x);
        return -x;
    }
    if (auto* lp = std::get_if<LogPower>(&spec.variant()))
        return -std::pow(u, lp->alpha / (lp->alpha - 1.0));
    if (auto* im = std::get_if<Intermediate>(&spec.variant()))
        return -u * std::pow(iter_log(im->k - 1, u), 1.0 / im->alpha);
    throw DomainError("flat_point_differences: not a flat variant");
}

}  // namespace

std::vector<FlatPointRow> flat_point_differences(const PhaseSpec& spec, int m_max, double h0,
                                                 int levels) {
    if (!spec.flat()) throw DomainError("flat_point_differences: phase is not flat at 0");
    if (m_max < 1 || m_max > 12) throw DomainError("flat_point_differences: m_max must lie in [1, 12]");
    if (!(h0 > 0.0) || m_max * h0 > spec.domain_radius())
        throw DomainError("flat_point_differences: m_max h0 must lie inside the domain");
    if (std::holds_alternative<LogPower>(spec.variant()) && m_max * h0 >= std::exp(-1.0))
        throw DomainError("flat_point_differences: LogPower needs m_max h0 < 1/e");
    const bool plateau = std::holds_alternative<PlateauPhase>(spec.variant());

    // log psi(j h) for j = 1..m_max at each level
    std::vector<double> log_h;
    std::vector<std::vector<double>> lpsi;
    for (int i = 0; i < levels; ++i) {
        double lh;
        std::vector<double> row(static_cast<std::size_t>(m_max) + 1, -kInf);
        if (plateau) {
            lh = std::log(h0) - 16.0 * i * std::log(2.0);
            if (lh < -700.0) break;
            for (int j = 1; j <= m_max; ++j) row[j] = std::log(eval_phase(spec, j * std::exp(lh)));
        } else {
            double u = -std::log(h0) * std::ldexp(1.0, i);
            if (u > 1e300) break;
            lh = -u;
            for (int j = 1; j <= m_max; ++j) row[j] = log_psi_u(spec, u - std::log(double(j)));
        }
        log_h.push_back(lh);
        lpsi.push_back(std::move(row));
    }

    std::vector<FlatPointRow> out;
    for (int m = 1; m <= m_max; ++m) {
        FlatPointRow fr;
        fr.m = m;
        fr.log_h = log_h;
        for (std::size_t i = 0; i < log_h.size(); ++i) {
            // Delta_h^m psi(0) = sum_j (-1)^(m-j) C(m,j) psi(jh), psi(0) = 0
            double S = -kInf;
            std::vector<double> lt(static_cast<std::size_t>(m) + 1);
            for (int j = 1; j <= m; ++j) {
                lt[j] = std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0) + lpsi[i][j];
                S = std::max(S, lt[j]);
            }
            double lr = -kInf;
            if (S > -kInf) {
                double s = 0.0;
                for (int j = 1; j <= m; ++j) s += ((m - j) % 2 ? -1.0 : 1.0) * std::exp(lt[j] - S);
                if (s != 0.0) lr = S + std::log(std::abs(s)) - m * log_h[i];
            }
            fr.log_ratio.push_back(lr);
        }
        std::size_t w = std::min<std::size_t>(5, fr.log_ratio.size());
        double first = -kInf, last = -kInf;
        for (std::size_t i = 0; i < w; ++i) first = std::max(first, fr.log_ratio[i]);
        for (std::size_t i = fr.log_ratio.size() - w; i < fr.log_ratio.size(); ++i)
            last = std::max(last, fr.log_ratio[i]);
        fr.vanishing = w > 0 && last < -10.0 && (last < first || last == -kInf);
        out.push_back(std::move(fr));
    }
    return out;
}

}  // namespace oscillab
