#include "oscillab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <type_traits>

#include "oscillab/iterlog.hpp"

namespace oscillab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxDepth = 48;
// Shells whose phase sweeps more than this many periods switch to the
// phase-variable rule when the phase has a closed-form inverse.
constexpr double kPhaseVariablePeriods = 1024.0;

struct Acc {
    CompensatedSum<cplx> value;
    CompensatedSum<double> err;
    std::int64_t nodes = 0;
};

class NodeBudget {
public:
    explicit NodeBudget(std::int64_t max) : max_(max) {}
    void charge(std::int64_t n, const Acc& acc, const char* strategy) {
        used_ += n;
        if (used_ > max_) {
            QuadratureReport partial;
            partial.value = acc.value.value();
            partial.est_error = acc.err.value();
            partial.nodes_used = used_;
            partial.strategy = strategy;
            throw BudgetExceeded("quadrature node budget exhausted", partial);
        }
    }
    std::int64_t used() const { return used_; }

private:
    std::int64_t max_;
    std::int64_t used_ = 0;
};

inline cplx osc_diff(double th_plus, double th_minus) {
    // e^{i a} - e^{i b} = 2i sin((a-b)/2) e^{i(a+b)/2}
    double half = 0.5 * (th_plus - th_minus);
    double mid = 0.5 * (th_plus + th_minus);
    double s = std::sin(half);
    return cplx(-2.0 * s * std::sin(mid), 2.0 * s * std::cos(mid));
}

// Half-difference and mean of the two phases, for callers that can form the
// difference without cancellation.
struct HalfMid {
    double half, mid;
};

inline cplx osc_half_mid(HalfMid h) {
    double s = std::sin(h.half);
    return cplx(-2.0 * s * std::sin(h.mid), 2.0 * s * std::cos(h.mid));
}

// Adaptive GL16 with GL8 discrepancy control on [a, b].
template <class F>
void adaptive(F&& f, double a, double b, const QuadratureConfig& cfg, Acc& acc,
              NodeBudget& budget, const char* strategy) {
    const auto& g16 = gauss16();
    const auto& g8 = gauss8();
    struct Seg {
        double a, b;
        int depth;
    };
    Seg stack[kMaxDepth + 2];
    int top = 0;
    stack[top++] = {a, b, 0};
    while (top > 0) {
        Seg s = stack[--top];
        double c = 0.5 * (s.a + s.b), h = 0.5 * (s.b - s.a);
        cplx q16 = 0.0, q8 = 0.0;
        double l1 = 0.0;
        for (std::size_t i = 0; i < 16; ++i) {
            cplx v = f(c + h * g16.x[i]);
            q16 += g16.w[i] * v;
            l1 += g16.w[i] * std::abs(v);
        }
        for (std::size_t i = 0; i < 8; ++i) q8 += g8.w[i] * f(c + h * g8.x[i]);
        q16 *= h;
        q8 *= h;
        l1 *= std::abs(h);
        budget.charge(24, acc, strategy);
        acc.nodes += 24;
        double diff = std::abs(q16 - q8);
        if (diff <= cfg.rel_tol * l1 || s.depth >= kMaxDepth || !(diff == diff)) {
            acc.value.add(q16);
            acc.err.add(diff);
        } else {
            // right half first so the left half is processed next
            stack[top++] = {c, s.b, s.depth + 1};
            stack[top++] = {s.a, c, s.depth + 1};
        }
    }
}

// Elasticity D(log y) = t psi'/psi at the point where log psi = log y.
struct Elasticity {
    int kind = 0;  // 0 power, 1 gevrey, 2 iterexp, 3 logpower, 4 intermediate
    double c = 0.0, a = 0.0, b = 0.0;
    int k = 0;
    double alpha = 0.0;

    explicit Elasticity(const PhaseSpec& spec) {
        const auto& v = spec.variant();
        if (auto* p = std::get_if<PowerPhase>(&v)) {
            kind = 0;
            c = p->alpha + 1.0;
        } else if (auto* p = std::get_if<GevreyFlat>(&v)) {
            kind = 1;
            a = 1.0 / (p->s - 1.0);
        } else if (auto* p = std::get_if<IteratedExpFlat>(&v)) {
            kind = 2;
            a = 1.0 / (p->s - 1.0);
            k = p->k;
        } else if (auto* p = std::get_if<LogPower>(&v)) {
            kind = 3;
            b = p->alpha / (p->alpha - 1.0);
        } else if (auto* p = std::get_if<Intermediate>(&v)) {
            kind = 4;
            k = p->k;
            alpha = p->alpha;
        } else {
            throw DomainError("phase has no closed-form inverse");
        }
    }

    double operator()(double log_y) const {
        double Y = -log_y;
        switch (kind) {
            case 0: return c;
            case 1: return a * Y;
            case 2: {
                double d = a * Y, L = Y;
                for (int j = 0; j < k; ++j) {
                    L = std::log(L);
                    d *= L;
                }
                return d;
            }
            case 3: return b * std::pow(Y, (b - 1.0) / b);
            default: {
                double u = intermediate_Q_inverse(k, alpha, Y);
                return intermediate_Qprime(k, alpha, u);
            }
        }
    }
};

// Past this phase value the shell integral switches to Filon panels.
constexpr double kFilonStart = kTwoPi * 4096.0;
constexpr double kFilonFrac = 0.25;     // panel width relative to its left end
constexpr double kFilonMinHalf = 64.0;  // moment recursion needs half-width >> degree

// int_{c-hw}^{c+hw} (e^{iv} - 1) g(v) dv with g replaced by its degree n-1
// Chebyshev interpolant; the oscillatory moments are exact. Sets l1 to an
// estimate of int |g|.
cplx filon_panel(const std::function<double(double)>& g, double c, double hw, int n, double& l1) {
    double f[24], a[24], b[24] = {0.0};
    for (int j = 0; j < n; ++j) f[j] = g(c + hw * std::cos(kPi * (j + 0.5) / n));
    l1 = 0.0;
    for (int j = 0; j < n; ++j) l1 += std::abs(f[j]);
    l1 *= 2.0 * hw / n;
    for (int k = 0; k < n; ++k) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) sum += f[j] * std::cos(kPi * k * (j + 0.5) / n);
        a[k] = 2.0 * sum / n;
    }
    a[0] *= 0.5;
    // monomial coefficients through T_{k+1} = 2x T_k - T_{k-1}
    double t0[24] = {1.0}, t1[24] = {0.0, 1.0}, t2[24];
    b[0] += a[0];
    if (n > 1) b[1] += a[1];
    for (int k = 2; k < n; ++k) {
        for (int m = 0; m < n; ++m) t2[m] = (m > 0 ? 2.0 * t1[m - 1] : 0.0) - t0[m];
        for (int m = 0; m < n; ++m) b[m] += a[k] * t2[m];
        std::copy(t1, t1 + n, t0);
        std::copy(t2, t2 + n, t1);
    }
    // I_m = int_{-1}^{1} x^m e^{i w x} dx, forward recursion (stable for m < w)
    const double w = hw;
    const cplx iw(0.0, w), ep = std::polar(1.0, w), em = std::conj(ep);
    cplx I = 2.0 * std::sin(w) / w, osc = b[0] * I;
    double flat = 2.0 * b[0];
    for (int m = 1; m < n; ++m) {
        I = (ep - (m % 2 ? -em : em)) / iw - static_cast<double>(m) / iw * I;
        osc += b[m] * I;
        if (m % 2 == 0) flat += 2.0 * b[m] / (m + 1);
    }
    return hw * (std::polar(1.0, c) * osc - flat);
}

// Filon panels over [a, b]; panels that fail the 16/10 node comparison are
// halved, and anything too short for the moment recursion goes to `fallback`.
template <class F>
void filon_range(const std::function<double(double)>& g, double a, double b, const QuadratureConfig& cfg,
                 Acc& acc, NodeBudget& budget, F&& fallback) {
    const char* strategy = "direct-shells+phase-variable";
    double v = a;
    while (v < b) {
        double width = std::min(kFilonFrac * v, b - v);
        bool done = false;
        while (0.5 * width >= kFilonMinHalf) {
            double l1 = 0.0, l1c = 0.0;
            cplx q16 = filon_panel(g, v + 0.5 * width, 0.5 * width, 16, l1);
            cplx q10 = filon_panel(g, v + 0.5 * width, 0.5 * width, 10, l1c);
            budget.charge(26, acc, strategy);
            acc.nodes += 26;
            double diff = std::abs(q16 - q10);
            if (diff <= cfg.rel_tol * l1) {
                acc.value.add(q16);
                acc.err.add(diff);
                done = true;
                break;
            }
            width *= 0.5;
        }
        if (!done) {
            width = std::min(2.0 * kFilonMinHalf, b - v);
            fallback(v, v + width);
        }
        v += width;
    }
}

// int over v in [V_lo, V_hi] of (e^{iv} - 1) / (v D(v)), the shell integral in
// the phase variable v = lam psi(t). Interior panels sit on the lattice
// 2 pi m / ppp so e^{iv} at every node is a table product, with no large
// argument reductions.
void phase_variable_shell(const Elasticity& D, double log_lam, double V_lo, double V_hi,
                          const QuadratureConfig& cfg, Acc& acc, NodeBudget& budget) {
    const char* strategy = "direct-shells+phase-variable";
    const int ppp = cfg.panels_per_period;
    const double delta = kTwoPi / ppp;
    const double inv_c = D.kind == 0 ? 1.0 / D.c : 0.0;
    auto g = [&](double v) {
        // power phases have constant elasticity; skip the log
        return inv_c != 0.0 ? inv_c / v : 1.0 / (v * D(std::log(v) - log_lam));
    };
    auto generic = [&](double v) {
        return cplx(std::cos(v) - 1.0, std::sin(v)) * g(v);
    };

    const auto& g16 = gauss16();
    const auto& g8 = gauss8();
    const double h = 0.5 * delta;
    std::vector<cplx> R(ppp), T16(16), T8(8);
    for (int r = 0; r < ppp; ++r) R[r] = std::polar(1.0, kTwoPi * r / ppp);
    for (int i = 0; i < 16; ++i) T16[i] = std::polar(1.0, h * (1.0 + g16.x[i]));
    for (int i = 0; i < 8; ++i) T8[i] = std::polar(1.0, h * (1.0 + g8.x[i]));

    if (V_hi > kFilonStart) {
        double split = std::max(V_lo, kFilonStart);
        std::function<double(double)> gf = g;
        filon_range(gf, split, V_hi, cfg, acc, budget,
                    [&](double x, double y) { adaptive(generic, x, y, cfg, acc, budget, strategy); });
        if (split <= V_lo) return;
        V_hi = split;
    }

    double m_lo = std::ceil(V_lo / delta), m_hi = std::floor(V_hi / delta);
    if (m_hi <= m_lo) {
        adaptive(generic, V_lo, V_hi, cfg, acc, budget, strategy);
        return;
    }
    if (m_lo * delta > V_lo) adaptive(generic, V_lo, m_lo * delta, cfg, acc, budget, strategy);

    auto m0 = static_cast<std::int64_t>(m_lo), m1 = static_cast<std::int64_t>(m_hi);
    CompensatedSum<cplx> shell;
    for (std::int64_t m = m0; m < m1; ++m) {
        double v0 = static_cast<double>(m) * delta;
        cplx anchor = R[static_cast<std::size_t>(m % ppp)];
        cplx q16 = 0.0, q8 = 0.0;
        double l1 = 0.0;
        for (int i = 0; i < 16; ++i) {
            cplx val = (anchor * T16[i] - 1.0) * g(v0 + h * (1.0 + g16.x[i]));
            q16 += g16.w[i] * val;
            l1 += g16.w[i] * std::abs(val);
        }
        for (int i = 0; i < 8; ++i)
            q8 += g8.w[i] * ((anchor * T8[i] - 1.0) * g(v0 + h * (1.0 + g8.x[i])));
        q16 *= h;
        q8 *= h;
        l1 *= h;
        budget.charge(24, acc, strategy);
        acc.nodes += 24;
        double diff = std::abs(q16 - q8);
        if (diff <= cfg.rel_tol * l1) {
            shell.add(q16);
            acc.err.add(diff);
        } else {
            Acc sub;
            adaptive(generic, v0, v0 + delta, cfg, sub, budget, strategy);
            shell.add(sub.value.value());
            acc.err.add(sub.err.value());
            acc.nodes += sub.nodes;
        }
    }
    acc.value.add(shell.value());
    if (m_hi * delta < V_hi) adaptive(generic, m_hi * delta, V_hi, cfg, acc, budget, strategy);
}

struct DirectHooks {
    double radius = 1.0;
    std::function<double(double)> trunc;                        // mass bound on (0, a]
    std::function<void(double, double, std::vector<double>&)> cuts;  // interior breakpoints
    std::function<double(double, double)> tv;                   // phase variation estimate
    // Phase-variable shells (monotone one-sided phases only).
    const PhaseSpec* pv_spec = nullptr;
    double lam = 0.0;
};

template <class Theta>
QuadratureReport direct_engine(const DirectHooks& hk, Theta theta, const QuadratureConfig& cfg,
                               const char* strategy) {
    QuadratureReport rep;
    rep.strategy = strategy;
    NodeBudget budget(cfg.max_nodes);
    auto f = [&](double t) {
        if constexpr (std::is_same_v<decltype(theta(t)), HalfMid>) {
            return osc_half_mid(theta(t)) / t;
        } else {
            auto [tp, tm] = theta(t);
            return osc_diff(tp, tm) / t;
        }
    };
    const double period_piece = kTwoPi / cfg.panels_per_period;
    std::vector<cplx> shell_values;
    CompensatedSum<double> err;
    std::int64_t nodes = 0;
    std::vector<double> cuts;
    std::unique_ptr<Elasticity> elast;
    if (hk.pv_spec) elast = std::make_unique<Elasticity>(*hk.pv_spec);
    const double log_lam = std::log(hk.lam);

    double hi = hk.radius;
    int shells = 0;
    bool closed = false;
    for (; shells < cfg.max_shells; ++shells) {
        double tb = hk.trunc(hi);
        if (tb <= cfg.tail_epsilon) {
            rep.truncation_bound = tb;
            closed = true;
            break;
        }
        double lo = 0.5 * hi;
        Acc acc;
        bool used_pv = false;
        if (elast) {
            double V_lo = hk.lam * eval_phase(*hk.pv_spec, lo);
            double V_hi = hk.lam * eval_phase(*hk.pv_spec, hi);
            if (V_hi - V_lo > kTwoPi * kPhaseVariablePeriods && V_lo > 0.0) {
                phase_variable_shell(*elast, log_lam, V_lo, V_hi, cfg, acc, budget);
                used_pv = true;
                rep.strategy = "direct-shells+phase-variable";
            }
        }
        if (!used_pv) {
            cuts.clear();
            cuts.push_back(lo);
            if (hk.cuts) hk.cuts(lo, hi, cuts);
            cuts.push_back(hi);
            for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
                // size panels so the phase moves at most 2 pi / ppp across each
                struct Piece {
                    double a, b;
                };
                std::vector<Piece> work{{cuts[p], cuts[p + 1]}};
                while (!work.empty()) {
                    Piece pc = work.back();
                    work.pop_back();
                    double v = hk.tv(pc.a, pc.b);
                    if (v > period_piece && (pc.b - pc.a) > 1e-15 * pc.b) {
                        double m = 0.5 * (pc.a + pc.b);
                        work.push_back({m, pc.b});
                        work.push_back({pc.a, m});
                        continue;
                    }
                    adaptive(f, pc.a, pc.b, cfg, acc, budget, strategy);
                }
            }
        }
        shell_values.push_back(acc.value.value());
        err.add(acc.err.value());
        nodes += acc.nodes;
        hi = lo;
    }
    if (!closed) rep.truncation_bound = hk.trunc(hi);
    rep.value = pairwise_sum(shell_values);
    rep.est_error = err.value();
    rep.nodes_used = budget.used();
    rep.shells_used = shells;
    return rep;
}

double sampled_tv(const std::function<double(double)>& phase, double a, double b) {
    const int n = 8;
    double prev = phase(a), s = 0.0;
    for (int i = 1; i <= n; ++i) {
        double x = a + (b - a) * i / n;
        double v = phase(x);
        s += std::abs(v - prev);
        prev = v;
    }
    return 1.25 * s;
}

void plateau_cuts(double lo, double hi, std::vector<double>& cuts) {
    // shell (lo, 2 lo] carries eta(x), x = t / (2 lo); plateau x in [3/5, 4/5]
    if (hi > 0.5 + 1e-15) return;  // (1/2, 1] carries no bump
    cuts.push_back(1.2 * lo);
    cuts.push_back(1.6 * lo);
}

bool monotone_variant(const PhaseSpec& spec) {
    return spec.has_inverse();
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0) || panels_per_period < 4 || max_shells <= 0 || !(tail_epsilon > 0.0) ||
        max_nodes <= 0)
        throw DomainError(
            "QuadratureConfig: all fields must be positive and panels_per_period >= 4");
}

QuadratureReport compute_m_direct(const PhaseSpec& spec, double lam, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(lam >= 0.0) || !std::isfinite(lam)) throw DomainError("compute_m_direct: lambda >= 0");
    if (lam > 9007199254740992.0) throw DomainError("compute_m_direct: lambda beyond 2^53");
    if (lam == 0.0) {
        QuadratureReport z;
        z.strategy = "zero";
        return z;
    }
    DirectHooks hk;
    hk.radius = spec.domain_radius();
    hk.lam = lam;
    hk.trunc = [&](double a) { return truncation_bound(spec, lam, a); };
    bool one = spec.one_sided();
    auto plus = [&](double t) { return lam * eval_phase(spec, t); };
    auto minus = [&](double t) { return one ? 0.0 : lam * eval_phase(spec, -t); };
    if (monotone_variant(spec)) {
        hk.tv = [&](double a, double b) { return std::abs(plus(b) - plus(a)); };
        hk.pv_spec = &spec;
    } else if (std::holds_alternative<PlateauPhase>(spec.variant())) {
        hk.cuts = plateau_cuts;
        hk.tv = [&](double a, double b) { return std::abs(plus(b) - plus(a)); };
    } else {
        std::function<double(double)> pp = plus, mm = minus;
        hk.tv = [pp, mm](double a, double b) {
            return std::max(sampled_tv(pp, a, b), sampled_tv(mm, a, b));
        };
    }
    if (auto* poly = std::get_if<Polynomial>(&spec.variant())) {
        // odd and even parts by Horner in t^2: psi(t) - psi(-t) is never formed
        const auto& c = poly->coefficients;
        auto theta_poly = [&c, lam](double t) {
            double t2 = t * t, odd = 0.0, even = 0.0;
            for (std::size_t i = c.size(); i-- > 0;) {
                if (i % 2)
                    odd = odd * t2 + c[i];
                else
                    even = even * t2 + c[i];
            }
            return HalfMid{lam * odd * t, lam * even};
        };
        return direct_engine(hk, theta_poly, cfg, "direct-shells");
    }
    auto theta = [&](double t) { return std::pair<double, double>(plus(t), minus(t)); };
    return direct_engine(hk, theta, cfg, "direct-shells");
}

QuadratureReport compute_m_direct(const PhaseSpec& plateau, const OddProductLadder& L, int n,
                                  const QuadratureConfig& cfg) {
    cfg.validate();
    const PlateauTable* tab = plateau.plateau_table();
    if (!tab) throw DomainError("exact-frequency quadrature needs a PlateauPhase");
    if (tab->k != L.k || tab->j0 != L.j0) throw MismatchError("ladder does not match the phase");
    if (n < 0 || n > L.n_max()) throw DomainError("n outside the ladder");
    if (n == 0) {
        QuadratureReport z;
        z.strategy = "zero";
        return z;
    }
    const BigInt& Qn = L.Q_at(n);
    // K_j = Q_n / Q_j exactly; the oscillation count is sum_j K_j.
    std::vector<double> K(n + 1, 0.0);
    BigInt total = 0;
    for (int j = 1; j <= n; ++j) {
        BigInt Kj = Qn / L.Q_at(j);
        total += Kj;
        K[j] = to_double_big(Kj);
    }
    double total_d = to_double_big(total);
    if (total_d > static_cast<double>(cfg.max_nodes) / cfg.panels_per_period) {
        QuadratureReport partial;
        partial.strategy = "direct-exact-plateau";
        throw BudgetExceeded("plateau oscillation count exceeds max_nodes/panels_per_period",
                             partial);
    }
    const double logQn = log_big(Qn);
    const double lam = std::exp(logQn);
    // unreduced phase for panel sizing; reduced phase for evaluation
    auto shell_of = [](double t, double& x) {
        int e = 0;
        x = std::frexp(t, &e);
        return -e;
    };
    auto raw = [&](double t) -> double {
        double x;
        int j = shell_of(t, x);
        if (t >= 0.5 || j < 1 || j >= static_cast<int>(tab->a.size())) return 0.0;
        double eta = bump(x);
        if (eta == 0.0) return 0.0;
        if (j <= n) return kPi * K[j] * eta;
        return kPi * std::exp(logQn - tab->logQ[j]) * eta;
    };
    auto theta = [&](double t) -> std::pair<double, double> {
        double x;
        int j = shell_of(t, x);
        if (t >= 0.5 || j < 1 || j >= static_cast<int>(tab->a.size())) return {0.0, 0.0};
        double eta = bump(x);
        if (eta == 0.0) return {0.0, 0.0};
        if (j <= n) return {kPi * std::fmod(K[j] * eta, 2.0), 0.0};
        return {kPi * std::exp(logQn - tab->logQ[j]) * eta, 0.0};
    };
    DirectHooks hk;
    hk.radius = 1.0;
    hk.lam = lam;
    hk.trunc = [&](double a) { return truncation_bound(plateau, lam, a); };
    hk.cuts = plateau_cuts;
    hk.tv = [&](double a, double b) { return std::abs(raw(b) - raw(a)); };
    return direct_engine(hk, theta, cfg, "direct-exact-plateau");
}

QuadratureReport compute_m_substituted(const SubstitutionWeight& w, double prefactor, double lam,
                                       const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(lam >= 0.0) || !std::isfinite(lam)) throw DomainError("compute_m_substituted: lambda >= 0");
    QuadratureReport rep;
    rep.strategy = "substituted";
    if (lam == 0.0) return rep;
    const char* strategy = "substituted";
    NodeBudget budget(cfg.max_nodes);
    const double u0 = w.u0;
    const double ustar = std::min(1.0 / lam, u0);
    auto wf = [&](double u) { return eval_weight(w, u); };
    auto small = [&](double u) {
        double x = lam * u;
        double s = std::sin(0.5 * x);
        return cplx(-2.0 * s * s, 2.0 * s * std::cos(0.5 * x)) * wf(u);
    };
    std::vector<cplx> parts;
    CompensatedSum<double> err;

    // (0, u*]: dyadic shells with |e^{i lam u} - 1| <= lam u and u w(u) increasing
    double hi = ustar;
    int shells = 0;
    const double eps_target = cfg.tail_epsilon / std::max(std::abs(prefactor), 1e-300);
    std::vector<cplx> low;
    for (; shells < cfg.max_shells; ++shells) {
        double tb = lam * hi * hi * wf(hi);
        if (tb <= eps_target) {
            rep.truncation_bound = std::abs(prefactor) * tb;
            break;
        }
        Acc acc;
        adaptive(small, 0.5 * hi, hi, cfg, acc, budget, strategy);
        low.push_back(acc.value.value());
        err.add(acc.err.value());
        hi *= 0.5;
    }
    parts.push_back(pairwise_sum(low));

    // [u*, u0]: lattice panels of width (2 pi / lam) / ppp anchored at u*
    if (u0 > ustar) {
        const int ppp = cfg.panels_per_period;
        const double du = kTwoPi / lam / ppp;
        const double h = 0.5 * du;
        const auto& g16 = gauss16();
        const auto& g8 = gauss8();
        std::vector<cplx> R(ppp), T16(16), T8(8);
        for (int r = 0; r < ppp; ++r) R[r] = std::polar(1.0, kTwoPi * r / ppp);
        for (int i = 0; i < 16; ++i) T16[i] = std::polar(1.0, lam * h * (1.0 + g16.x[i]));
        for (int i = 0; i < 8; ++i) T8[i] = std::polar(1.0, lam * h * (1.0 + g8.x[i]));
        const cplx base = std::polar(1.0, lam * ustar);
        auto full = [&](double u) { return (std::polar(1.0, lam * u) - 1.0) * wf(u); };
        auto npan = static_cast<std::int64_t>(std::floor((u0 - ustar) / du));
        Acc acc;
        CompensatedSum<cplx> osc;
        for (std::int64_t m = 0; m < npan; ++m) {
            double a = ustar + static_cast<double>(m) * du;
            cplx anchor = base * R[static_cast<std::size_t>(m % ppp)];
            cplx q16 = 0.0, q8 = 0.0;
            double l1 = 0.0;
            for (int i = 0; i < 16; ++i) {
                cplx val = (anchor * T16[i] - 1.0) * wf(a + h * (1.0 + g16.x[i]));
                q16 += g16.w[i] * val;
                l1 += g16.w[i] * std::abs(val);
            }
            for (int i = 0; i < 8; ++i)
                q8 += g8.w[i] * ((anchor * T8[i] - 1.0) * wf(a + h * (1.0 + g8.x[i])));
            q16 *= h;
            q8 *= h;
            l1 *= h;
            budget.charge(24, acc, strategy);
            double diff = std::abs(q16 - q8);
            if (diff <= cfg.rel_tol * l1) {
                osc.add(q16);
                err.add(diff);
            } else {
                Acc sub;
                adaptive(full, a, a + du, cfg, sub, budget, strategy);
                osc.add(sub.value.value());
                err.add(sub.err.value());
            }
        }
        double tail_a = ustar + static_cast<double>(npan) * du;
        if (tail_a < u0) {
            Acc sub;
            adaptive(full, tail_a, u0, cfg, sub, budget, strategy);
            osc.add(sub.value.value());
            err.add(sub.err.value());
        }
        parts.push_back(osc.value());
    }
    rep.value = prefactor * pairwise_sum(parts);
    rep.est_error = std::abs(prefactor) * err.value();
    rep.nodes_used = budget.used();
    rep.shells_used = shells;
    return rep;
}

int vanishing_order(const PhaseSpec& spec, int cap) {
    const auto& v = spec.variant();
    if (auto* p = std::get_if<Polynomial>(&v)) {
        for (std::size_t i = 1; i < p->coefficients.size(); i += 2) {
            if (static_cast<int>(i) > cap) break;
            if (p->coefficients[i] != 0.0) return static_cast<int>(i);
        }
        bool any_odd = false;
        for (std::size_t i = 1; i < p->coefficients.size(); i += 2)
            any_odd = any_odd || p->coefficients[i] != 0.0;
        if (!any_odd) return 0;
        throw NotFiniteType("vanishing order exceeds the cap");
    }
    if (auto* p = std::get_if<PowerPhase>(&v)) {
        if (p->alpha + 1 > cap) throw NotFiniteType("vanishing order exceeds the cap");
        return p->alpha + 1;
    }
    throw NotFiniteType(spec.name() + " is flat at the origin");
}

std::vector<VdcShell> vdc_shell_values(const PhaseSpec& spec, double lam, int j_lo, int j_hi,
                                       const QuadratureConfig& cfg) {
    cfg.validate();
    int k = vanishing_order(spec);
    std::vector<VdcShell> out;
    bool one = spec.one_sided();
    auto plus = [&](double t) { return lam * eval_phase(spec, t); };
    auto minus = [&](double t) { return one ? 0.0 : lam * eval_phase(spec, -t); };
    std::function<double(double)> pp = plus, mm = minus;
    const auto& g16 = gauss16();
    (void)g16;
    for (int j = j_lo; j <= j_hi; ++j) {
        VdcShell s;
        s.j = j;
        s.t_j = std::ldexp(spec.domain_radius(), -j);
        s.Lambda = lam * std::pow(s.t_j, k == 0 ? 1 : k);
        if (k == 0) {
            out.push_back(s);
            continue;
        }
        DirectHooks hk;
        hk.radius = s.t_j;
        hk.lam = lam;
        // integrate exactly one shell: the truncation hook closes after it
        double shell_lo = 0.5 * s.t_j;
        hk.trunc = [shell_lo](double a) { return a <= shell_lo ? 0.0 : 1.0; };
        hk.tv = [pp, mm](double a, double b) {
            return std::max(sampled_tv(pp, a, b), sampled_tv(mm, a, b));
        };
        auto theta = [&](double t) { return std::pair<double, double>(plus(t), minus(t)); };
        QuadratureConfig c = cfg;
        c.tail_epsilon = 0.5;
        QuadratureReport r = direct_engine(hk, theta, c, "vdc-shell");
        s.abs_J = std::abs(r.value);
        s.est_error = r.est_error;
        out.push_back(s);
    }
    return out;
}

double certified_nonneg_realpart(const PhaseSpec& spec, double lam) {
    if (!spec.one_sided()) throw DomainError("certified_nonneg_realpart: phase must be one-sided");
    if (!(lam >= 0.0)) throw DomainError("certified_nonneg_realpart: lambda >= 0");
    if (lam == 0.0) return 0.0;
    const double ln43 = std::log(4.0 / 3.0);
    if (const PlateauTable* tab = spec.plateau_table()) {
        // on J_j the integrand is exactly (1 - cos(lam a_j)) / t
        CompensatedSum<double> s;
        for (std::size_t j = 1; j < tab->a.size(); ++j) {
            double x = lam * tab->a[j];
            double h = std::sin(0.5 * x);
            s.add(2.0 * h * h * ln43);
        }
        return std::max(0.0, s.value() * (1.0 - 1e-14));
    }
    if (!spec.has_inverse()) throw DomainError("certified_nonneg_realpart: unsupported variant");
    // where lam psi lies in [2 pi m + pi/2, 2 pi m + 3 pi/2] the integrand is >= 1/t
    const double top = lam * eval_phase(spec, spec.domain_radius());
    const double log_lam = std::log(lam);
    CompensatedSum<double> s;
    const std::int64_t cap = 2'000'000;
    for (std::int64_t m = 0; m < cap; ++m) {
        double lo = kTwoPi * m + 0.5 * kPi, hi = kTwoPi * m + 1.5 * kPi;
        if (hi > top) break;
        double t_lo = phase_inverse(spec, std::log(lo) - log_lam).t;
        double t_hi = phase_inverse(spec, std::log(hi) - log_lam).t;
        double len = std::log(t_hi / t_lo);
        // shrink for rounding in the inverse
        len -= 1e-12 * (1.0 + std::abs(std::log(t_hi)));
        if (len > 0.0) s.add(len);
    }
    return std::max(0.0, s.value());
}

VdcCheck vdc_check(const PhaseSpec& spec, double fit_lambda, const std::vector<double>& check_lambdas,
                   int j_lo, int j_hi, double safety, double C_max, const QuadratureConfig& cfg) {
    VdcCheck out;
    out.k = vanishing_order(spec);
    if (out.k == 0) throw NotFiniteType("vdc_check: phi vanishes identically");
    out.fit_lambda = fit_lambda;
    auto rows_at = [&](double lam) {
        std::vector<VdcRow> rows;
        for (const auto& sh : vdc_shell_values(spec, lam, j_lo, j_hi, cfg)) {
            VdcRow r;
            r.lambda = lam;
            r.shell = sh;
            r.envelope = std::min(sh.Lambda, std::pow(sh.Lambda, -1.0 / out.k));
            r.ratio = r.envelope > 0.0 ? sh.abs_J / r.envelope : 0.0;
            rows.push_back(r);
        }
        return rows;
    };
    for (const auto& r : rows_at(fit_lambda)) out.max_fit_ratio = std::max(out.max_fit_ratio, r.ratio);
    out.C = safety * out.max_fit_ratio;
    out.pass = out.C <= C_max;
    for (double lam : check_lambdas)
        for (auto& r : rows_at(lam)) {
            out.pass = out.pass && r.ratio <= out.C;
            out.rows.push_back(r);
        }
    return out;
}

double certified_nonneg_realpart(const PhaseSpec& plateau, const OddProductLadder& L, int n) {
    const PlateauTable* tab = plateau.plateau_table();
    if (!tab) throw DomainError("certified_nonneg_realpart: needs a PlateauPhase");
    if (tab->k != L.k || tab->j0 != L.j0) throw MismatchError("ladder does not match the phase");
    if (n < 0 || n > L.n_max()) throw DomainError("n outside the ladder");
    const double ln43 = std::log(4.0 / 3.0);
    const BigInt& Qn = L.Q_at(n);
    int odd = 0;
    for (int j = 1; j <= n; ++j) {
        BigInt q, r;
        boost::multiprecision::divide_qr(Qn, L.Q_at(j), q, r);
        // cos(pi K) = -1 exactly when K is an odd integer
        if (r == 0 && boost::multiprecision::bit_test(q, 0)) ++odd;
    }
    return 2.0 * odd * ln43;
}

}  // namespace oscillab
