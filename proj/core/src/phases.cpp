#include "oscillab/phases.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "oscillab/errors.hpp"
#include "oscillab/iterlog.hpp"
#include "oscillab/ladder.hpp"

namespace oscillab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPlateauShells = 1100;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double ipow(double t, int n) {
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= t;
        t *= t;
        n >>= 1;
    }
    return r;
}

double horner(const std::vector<double>& c, double t) {
    double r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * t + *it;
    return r;
}

double beta_of(double alpha) { return alpha / (alpha - 1.0); }

void check_radius(const PhaseSpec& spec, double t) {
    double r = spec.domain_radius();
    if (!(std::abs(t) <= r * (1.0 + 1e-12)))
        throw DomainError(spec.name() + ": |t| exceeds the domain radius");
}

// Iterated logs L_1..L_k of x into out[0..k-1].
void iter_logs(double x, int k, double* out) {
    for (int j = 0; j < k; ++j) {
        if (!(x > 0.0)) throw DomainError("iterated log of a nonpositive value");
        x = std::log(x);
        out[j] = x;
    }
}

std::shared_ptr<const PlateauTable> build_plateau_table(int k, int j0) {
    auto tab = std::make_shared<PlateauTable>();
    tab->k = k;
    tab->j0 = j0;
    tab->a.assign(kPlateauShells + 1, 0.0);
    tab->logQ.assign(kPlateauShells + 1, 0.0);
    BigInt Q = 1;
    bool exact = true;
    double logQ = 0.0;
    for (int j = 1; j <= kPlateauShells; ++j) {
        double qd = ladder_q_double(k, j0, j);
        if (exact) {
            Q *= BigInt(static_cast<long long>(qd));
            logQ = log_big(Q);
            if (logQ > 700.0) exact = false;
        } else {
            logQ += std::log(qd);
        }
        tab->logQ[j] = logQ;
        tab->a[j] = logQ <= 700.0 ? kPi / to_double_big(Q) : std::exp(std::log(kPi) - logQ);
    }
    return tab;
}

double plateau_eval(const PlateauTable& tab, double t) {
    if (!(t > 0.0) || t >= 0.5) return 0.0;
    int e = 0;
    double m = std::frexp(t, &e);  // t = m 2^e, m in [1/2, 1)
    int j = -e;                     // t in [2^-(j+1), 2^-j)
    if (j < 1 || j > kPlateauShells) return 0.0;
    double eta = bump(m);
    if (eta == 0.0) return 0.0;
    return tab.a[j] * eta;
}

}  // namespace

// ---------------------------------------------------------------- spec

PhaseSpec PhaseSpec::power(int alpha, double radius) {
    if (alpha < 1) throw DomainError("PowerPhase: alpha must be a positive integer");
    if (!(radius > 0.0)) throw DomainError("domain_radius must be positive");
    return PhaseSpec(PowerPhase{alpha}, radius);
}

PhaseSpec PhaseSpec::plateau(int k, int j0) {
    if (k < 2) throw InvalidJ0("PlateauPhase: k must be >= 2");
    if (j0 < 0) j0 = minimal_j0(k);
    if (iter_log(k - 2, 1.0 + j0) < 2.0) throw InvalidJ0("PlateauPhase: j0 below the guard");
    PhaseSpec p(PlateauPhase{k, j0}, 1.0);
    p.plateau_ = build_plateau_table(k, j0);
    return p;
}

PhaseSpec PhaseSpec::gevrey(double s, double radius) {
    if (!(s > 1.0)) throw DomainError("GevreyFlat: s must exceed 1");
    if (!(radius > 0.0)) throw DomainError("domain_radius must be positive");
    return PhaseSpec(GevreyFlat{s}, radius);
}

PhaseSpec PhaseSpec::iterated_exp(int k, double s, double radius) {
    if (k < 1) throw DomainError("IteratedExpFlat: k must be >= 1");
    if (!(s > 1.0)) throw DomainError("IteratedExpFlat: s must exceed 1");
    if (!(radius > 0.0) || radius > 1.0) throw DomainError("IteratedExpFlat: radius in (0,1]");
    return PhaseSpec(IteratedExpFlat{k, s}, radius);
}

PhaseSpec PhaseSpec::log_power(double alpha, double radius) {
    if (!(alpha > 1.0)) throw DomainError("LogPower: alpha must exceed 1");
    if (radius < 0.0) radius = std::exp(-1.0);
    if (!(radius > 0.0) || radius > std::exp(-1.0) * (1.0 + 1e-15))
        throw DomainError("LogPower: radius must lie in (0, 1/e]");
    return PhaseSpec(LogPower{alpha}, radius);
}

PhaseSpec PhaseSpec::intermediate(int k, double alpha) {
    if (k < 2) throw DomainError("Intermediate: k must be >= 2");
    if (!(alpha > 0.0)) throw DomainError("Intermediate: alpha must be positive");
    // L_k(1/delta) = 2  <=>  1/delta = E_k(2)
    double log_inv_delta = iter_exp(k - 1, 2.0);
    if (log_inv_delta > 700.0)
        throw DomainError("Intermediate: delta = 1/E_k(2) is below double range for this k");
    double delta = std::exp(-log_inv_delta);
    return PhaseSpec(Intermediate{k, alpha, delta}, delta);
}

PhaseSpec PhaseSpec::polynomial(std::vector<double> coefficients, double radius) {
    if (!(radius > 0.0)) throw DomainError("domain_radius must be positive");
    return PhaseSpec(Polynomial{std::move(coefficients)}, radius);
}

std::string PhaseSpec::name() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const PowerPhase& p) { os << "PowerPhase(alpha=" << p.alpha << ")"; },
                   [&](const PlateauPhase& p) {
                       os << "PlateauPhase(k=" << p.k << ",j0=" << p.j0 << ")";
                   },
                   [&](const GevreyFlat& p) { os << "GevreyFlat(s=" << p.s << ")"; },
                   [&](const IteratedExpFlat& p) {
                       os << "IteratedExpFlat(k=" << p.k << ",s=" << p.s << ")";
                   },
                   [&](const LogPower& p) { os << "LogPower(alpha=" << p.alpha << ")"; },
                   [&](const Intermediate& p) {
                       os << "Intermediate(k=" << p.k << ",alpha=" << p.alpha << ")";
                   },
                   [&](const Polynomial& p) {
                       os << "Polynomial(degree=" << (p.coefficients.empty() ? 0 : p.coefficients.size() - 1)
                          << ")";
                   }},
               v_);
    return os.str();
}

bool PhaseSpec::one_sided() const { return !std::holds_alternative<Polynomial>(v_); }

bool PhaseSpec::flat() const {
    return std::holds_alternative<GevreyFlat>(v_) || std::holds_alternative<IteratedExpFlat>(v_) ||
           std::holds_alternative<LogPower>(v_) || std::holds_alternative<Intermediate>(v_) ||
           std::holds_alternative<PlateauPhase>(v_);
}

bool PhaseSpec::analytic_off_origin() const { return !std::holds_alternative<PlateauPhase>(v_); }

bool PhaseSpec::has_inverse() const {
    return std::holds_alternative<PowerPhase>(v_) || std::holds_alternative<GevreyFlat>(v_) ||
           std::holds_alternative<IteratedExpFlat>(v_) || std::holds_alternative<LogPower>(v_) ||
           std::holds_alternative<Intermediate>(v_);
}

// ---------------------------------------------------------------- bump

double smooth_step(double y) {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    double b0 = std::exp(-1.0 / y);
    double b1 = std::exp(-1.0 / (1.0 - y));
    return b0 / (b0 + b1);
}

double bump(double x) {
    if (x <= 0.5 || x >= 1.0) return 0.0;
    return smooth_step(10.0 * (x - 0.5)) * smooth_step(5.0 * (1.0 - x));
}

// ---------------------------------------------------------------- real evaluation

double intermediate_Q(int k, double alpha, double u) {
    return u * std::pow(iter_log(k - 1, u), 1.0 / alpha);
}

double intermediate_Qprime(int k, double alpha, double u) {
    double L[16] = {};
    iter_logs(u, k - 1, L);
    double A = std::pow(L[k - 2], 1.0 / alpha);
    double prod = 1.0;
    for (int j = 0; j < k - 1; ++j) prod *= L[j];
    return A * (1.0 + 1.0 / (alpha * prod));
}

double intermediate_Q_inverse(int k, double alpha, double q) {
    double umin = iter_exp(k - 1, 2.0);
    if (q < intermediate_Q(k, alpha, umin) * (1.0 - 1e-12))
        throw DomainError("Intermediate: Q^{-1} argument below the guarded region");
    double lo = umin, hi = std::max(umin, q);
    double u = std::clamp(q / std::pow(std::max(2.0, iter_log(k - 1, std::max(q, umin))), 1.0 / alpha),
                          lo, hi);
    for (int it = 0; it < 200; ++it) {
        double f = intermediate_Q(k, alpha, u) - q;
        if (f > 0.0)
            hi = u;
        else
            lo = u;
        double un = u - f / intermediate_Qprime(k, alpha, u);
        if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
        if (std::abs(un - u) <= 1e-16 * u) {
            u = un;
            break;
        }
        u = un;
    }
    return u;
}

double eval_phase(const PhaseSpec& spec, double t) {
    check_radius(spec, t);
    return std::visit(
        overloaded{
            [&](const PowerPhase& p) { return t > 0.0 ? ipow(t, p.alpha + 1) : 0.0; },
            [&](const PlateauPhase&) { return plateau_eval(*spec.plateau_table(), t); },
            [&](const GevreyFlat& p) {
                if (t <= 0.0) return 0.0;
                return std::exp(-std::pow(t, -1.0 / (p.s - 1.0)));
            },
            [&](const IteratedExpFlat& p) {
                if (t <= 0.0) return 0.0;
                double x = std::pow(t, -1.0 / (p.s - 1.0));
                double y = x;  // E_{k-1}(x) = log E_k(x)
                for (int i = 0; i < p.k - 1; ++i) {
                    y = std::exp(y);
                    if (y > 800.0) return 0.0;
                }
                if (y > 800.0) return 0.0;
                return std::exp(-std::exp(y));
            },
            [&](const LogPower& p) {
                if (t <= 0.0) return 0.0;
                if (t >= std::exp(-1.0) * (1.0 + 1e-15)) throw DomainError("LogPower: t >= 1/e");
                double u = -std::log(t);
                return std::exp(-std::pow(u, beta_of(p.alpha)));
            },
            [&](const Intermediate& p) {
                if (t <= 0.0) return 0.0;
                double u = -std::log(t);
                double Lk = iter_log(p.k - 1, u);
                if (Lk < 2.0 - 1e-9) throw DomainError("Intermediate: iterated log below 2");
                return std::exp(-u * std::pow(Lk, 1.0 / p.alpha));
            },
            [&](const Polynomial& p) { return horner(p.coefficients, t); }},
        spec.variant());
}

double eval_phi(const PhaseSpec& spec, double t) {
    double a = std::abs(t);
    double v = eval_phase(spec, a) - eval_phase(spec, -a);
    return t < 0.0 ? -v : v;
}

LogMag log_phase(const PhaseSpec& spec, double t) {
    check_radius(spec, t);
    if (!(t > 0.0)) return LogMag{};
    return std::visit(
        overloaded{
            [&](const PowerPhase& p) { return LogMag::from_log((p.alpha + 1) * std::log(t)); },
            [&](const PlateauPhase&) { return LogMag::from_value(eval_phase(spec, t)); },
            [&](const GevreyFlat& p) {
                double a = 1.0 / (p.s - 1.0);
                return LogMag::from_loglog(-a * std::log(t));
            },
            [&](const IteratedExpFlat& p) {
                double a = 1.0 / (p.s - 1.0);
                double y = -a * std::log(t);  // log x
                // log(-log psi) = log E_k(x) = E_{k-1}(x); iterate from log x
                double x = std::exp(y);
                double ll = x;
                for (int i = 0; i < p.k - 1; ++i) ll = std::exp(ll);
                return LogMag::from_loglog(ll);
            },
            [&](const LogPower& p) {
                double u = -std::log(t);
                return LogMag::from_loglog(beta_of(p.alpha) * std::log(u));
            },
            [&](const Intermediate& p) {
                double u = -std::log(t);
                double Lk = iter_log(p.k - 1, u);
                if (Lk < 2.0 - 1e-9) throw DomainError("Intermediate: iterated log below 2");
                return LogMag::from_loglog(std::log(u) + std::log(Lk) / p.alpha);
            },
            [&](const Polynomial&) { return LogMag::from_value(std::abs(eval_phase(spec, t))); }},
        spec.variant());
}

LogMag log_abs_phi(const PhaseSpec& spec, double t) {
    double a = std::abs(t);
    if (spec.one_sided()) return log_phase(spec, a);
    return LogMag::from_value(std::abs(eval_phi(spec, a)));
}

cplx log_phase_complex(const PhaseSpec& spec, cplx z) {
    return std::visit(
        overloaded{
            [&](const PowerPhase& p) { return cplx(p.alpha + 1.0) * std::log(z); },
            [&](const PlateauPhase&) -> cplx {
                throw DomainError("PlateauPhase is not analytic; no complex evaluation");
            },
            [&](const GevreyFlat& p) {
                double a = 1.0 / (p.s - 1.0);
                return -std::exp(-a * std::log(z));
            },
            [&](const IteratedExpFlat& p) {
                double a = 1.0 / (p.s - 1.0);
                cplx w = std::exp(-a * std::log(z));
                for (int i = 0; i < p.k; ++i) w = std::exp(w);
                return -w;
            },
            [&](const LogPower& p) {
                cplx u = -std::log(z);
                return -std::exp(beta_of(p.alpha) * std::log(u));
            },
            [&](const Intermediate& p) {
                cplx u = -std::log(z);
                cplx L = u;
                for (int j = 1; j < p.k; ++j) L = std::log(L);
                return -u * std::exp(std::log(L) / p.alpha);
            },
            [&](const Polynomial& p) {
                cplx r = 0.0;
                for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it)
                    r = r * z + *it;
                return std::log(r);
            }},
        spec.variant());
}

cplx eval_phase_complex(const PhaseSpec& spec, cplx z) {
    if (auto* p = std::get_if<Polynomial>(&spec.variant())) {
        cplx r = 0.0;
        for (auto it = p->coefficients.rbegin(); it != p->coefficients.rend(); ++it)
            r = r * z + *it;
        return r;
    }
    return std::exp(log_phase_complex(spec, z));
}

double phase_elasticity(const PhaseSpec& spec, double t) {
    if (!(t > 0.0)) throw DomainError("phase_elasticity: t must be positive");
    return std::visit(
        overloaded{
            [&](const PowerPhase& p) { return p.alpha + 1.0; },
            [&](const GevreyFlat& p) {
                double a = 1.0 / (p.s - 1.0);
                return a * std::pow(t, -a);
            },
            [&](const IteratedExpFlat& p) {
                double a = 1.0 / (p.s - 1.0);
                double x = std::pow(t, -a);
                double d = a * x, e = x;
                for (int j = 0; j < p.k; ++j) {
                    e = std::exp(e);
                    d *= e;
                }
                return d;
            },
            [&](const LogPower& p) {
                double b = beta_of(p.alpha);
                return b * std::pow(-std::log(t), b - 1.0);
            },
            [&](const Intermediate& p) { return intermediate_Qprime(p.k, p.alpha, -std::log(t)); },
            [&](const auto&) -> double {
                throw DomainError("phase_elasticity: variant is not monotone");
            }},
        spec.variant());
}

InversePoint phase_inverse(const PhaseSpec& spec, double log_y) {
    double Y = -log_y;
    return std::visit(
        overloaded{
            [&](const PowerPhase& p) {
                return InversePoint{std::exp(log_y / (p.alpha + 1.0)), p.alpha + 1.0};
            },
            [&](const GevreyFlat& p) {
                if (!(Y > 0.0)) throw DomainError("phase_inverse: log_y must be negative");
                double a = 1.0 / (p.s - 1.0);
                return InversePoint{std::pow(Y, -1.0 / a), a * Y};
            },
            [&](const IteratedExpFlat& p) {
                if (!(Y > 0.0)) throw DomainError("phase_inverse: log_y must be negative");
                double a = 1.0 / (p.s - 1.0);
                double L = Y, d = a * Y;
                for (int j = 0; j < p.k; ++j) {
                    if (!(L > 0.0)) throw DomainError("phase_inverse: outside the flat region");
                    L = std::log(L);
                    d *= L;
                }
                if (!(L > 0.0)) throw DomainError("phase_inverse: outside the flat region");
                return InversePoint{std::pow(L, -1.0 / a), d};
            },
            [&](const LogPower& p) {
                if (!(Y > 0.0)) throw DomainError("phase_inverse: log_y must be negative");
                double b = beta_of(p.alpha);
                double u = std::pow(Y, 1.0 / b);
                return InversePoint{std::exp(-u), b * std::pow(u, b - 1.0)};
            },
            [&](const Intermediate& p) {
                double u = intermediate_Q_inverse(p.k, p.alpha, Y);
                return InversePoint{std::exp(-u), intermediate_Qprime(p.k, p.alpha, u)};
            },
            [&](const auto&) -> InversePoint {
                throw DomainError("phase_inverse: variant has no closed-form inverse");
            }},
        spec.variant());
}

double truncation_bound(const PhaseSpec& spec, double lam, double a) {
    if (lam == 0.0 || a <= 0.0) return 0.0;
    const double ln2 = std::log(2.0);
    return std::visit(
        overloaded{
            [&](const PowerPhase& p) {
                return lam * ipow(a, p.alpha + 1) / (p.alpha + 1.0);
            },
            [&](const Polynomial& p) {
                double s = 0.0;
                for (std::size_t i = 1; i < p.coefficients.size(); i += 2)
                    s += 2.0 * std::abs(p.coefficients[i]) * std::pow(a, static_cast<double>(i)) /
                         static_cast<double>(i);
                return lam * s;
            },
            [&](const PlateauPhase&) {
                const PlateauTable& tab = *spec.plateau_table();
                int e = 0;
                std::frexp(std::min(a, 0.5), &e);
                int j = std::max(1, -e);
                if (j > kPlateauShells) return 0.0;
                // a_{j+1} <= a_j / 5, so the geometric factor is 1.25
                return 1.25 * lam * tab.a[j] * ln2;
            },
            [&](const auto&) {
                // monotone flat: each halving shell contributes at most lam psi(top) log 2
                double s = 0.0, t = a;
                for (int i = 0; i < 2000; ++i) {
                    double v = eval_phase(spec, t);
                    s += lam * v * ln2;
                    if (v == 0.0 || v * lam * ln2 < 1e-40 * s) break;
                    t *= 0.5;
                }
                return s;
            }},
        spec.variant());
}

// ---------------------------------------------------------------- weights

namespace {

void check_weight_monotone(const SubstitutionWeight& w) {
    if (!(w.u0 > 0.0 && w.u0 < 1.0)) throw DomainError("weight cutoff u0 must lie in (0,1)");
    const int n = 1024;
    double prev = eval_weight(w, w.u0);
    for (int i = 1; i < n; ++i) {
        double u = w.u0 * std::exp(-40.0 * i / (n - 1.0));
        double v = eval_weight(w, u);
        if (!(v > prev) || !std::isfinite(v))
            throw DomainError("weight is not strictly decreasing on (0, u0]");
        prev = v;
    }
}

}  // namespace

SubstitutionWeight gevrey_weight(double s, double u0) {
    if (!(s > 1.0)) throw DomainError("GevreyWeight: s must exceed 1");
    SubstitutionWeight w{WeightKind::Gevrey, 1, s, 0.0, u0 < 0.0 ? std::exp(-1.0) : u0};
    check_weight_monotone(w);
    return w;
}

SubstitutionWeight refined_gevrey_weight(int k, double s, double u0) {
    if (k < 1 || !(s > 1.0)) throw DomainError("RefinedGevreyWeight: k >= 1 and s > 1");
    if (u0 < 0.0) u0 = std::exp(-iter_exp(k, 1.0));
    SubstitutionWeight w{WeightKind::RefinedGevrey, k, s, 0.0, u0};
    check_weight_monotone(w);
    return w;
}

SubstitutionWeight log_power_weight(double alpha, double u0) {
    if (!(alpha > 1.0)) throw DomainError("LogPowerWeight: alpha must exceed 1");
    SubstitutionWeight w{WeightKind::LogPower, 1, 0.0, alpha, u0 < 0.0 ? std::exp(-1.0) : u0};
    check_weight_monotone(w);
    return w;
}

SubstitutionWeight intermediate_weight(int k, double alpha, double u0) {
    if (k < 2 || !(alpha > 0.0)) throw DomainError("IntermediateWeight: k >= 2, alpha > 0");
    double umin = iter_exp(k - 1, 2.0);
    double u0max = std::exp(-intermediate_Q(k, alpha, umin));
    if (u0 < 0.0) u0 = u0max;
    if (u0 > u0max * (1.0 + 1e-12)) throw DomainError("IntermediateWeight: u0 outside region");
    SubstitutionWeight w{WeightKind::Intermediate, k, 0.0, alpha, u0};
    check_weight_monotone(w);
    return w;
}

SubstitutionWeight matched_weight(const PhaseSpec& spec) {
    double u0 = eval_phase(spec, spec.domain_radius());
    return std::visit(
        overloaded{[&](const GevreyFlat& p) { return gevrey_weight(p.s, u0); },
                   [&](const IteratedExpFlat& p) { return refined_gevrey_weight(p.k, p.s, u0); },
                   [&](const LogPower& p) { return log_power_weight(p.alpha, u0); },
                   [&](const Intermediate& p) { return intermediate_weight(p.k, p.alpha, u0); },
                   [&](const auto&) -> SubstitutionWeight {
                       throw MismatchError(spec.name() + " has no substitution weight");
                   }},
        spec.variant());
}

double weight_prefactor(const SubstitutionWeight& w) {
    switch (w.kind) {
        case WeightKind::Gevrey:
        case WeightKind::RefinedGevrey:
            return w.s - 1.0;
        case WeightKind::LogPower:
            return 1.0 / beta_of(w.alpha);
        case WeightKind::Intermediate:
            return 1.0;
    }
    return 1.0;
}

std::string weight_name(const SubstitutionWeight& w) {
    std::ostringstream os;
    switch (w.kind) {
        case WeightKind::Gevrey: os << "GevreyWeight(s=" << w.s << ")"; break;
        case WeightKind::RefinedGevrey:
            os << "RefinedGevreyWeight(k=" << w.k << ",s=" << w.s << ")";
            break;
        case WeightKind::LogPower: os << "LogPowerWeight(alpha=" << w.alpha << ")"; break;
        case WeightKind::Intermediate:
            os << "IntermediateWeight(k=" << w.k << ",alpha=" << w.alpha << ")";
            break;
    }
    return os.str();
}

double eval_weight(const SubstitutionWeight& w, double u) {
    if (!(u > 0.0) || u >= 1.0) throw DomainError("eval_weight: u must lie in (0,1)");
    double L = -std::log(u);
    switch (w.kind) {
        case WeightKind::Gevrey:
            return 1.0 / (u * L);
        case WeightKind::RefinedGevrey: {
            double prod = L, x = L;
            for (int j = 2; j <= w.k + 1; ++j) {
                x = std::log(x);
                if (!(x > 0.0)) throw DomainError("RefinedGevreyWeight: iterated log not positive");
                prod *= x;
            }
            return 1.0 / (u * prod);
        }
        case WeightKind::LogPower:
            return 1.0 / (u * std::pow(L, 1.0 / w.alpha));
        case WeightKind::Intermediate: {
            if (u > w.u0 * (1.0 + 1e-12)) throw DomainError("IntermediateWeight: u above u0");
            double uu = intermediate_Q_inverse(w.k, w.alpha, L);
            return 1.0 / (u * intermediate_Qprime(w.k, w.alpha, uu));
        }
    }
    return 0.0;
}

WeightConsistencyReport weight_consistency(const PhaseSpec& spec, const SubstitutionWeight& w,
                                           const std::vector<double>& t_grid, double tol) {
    bool ok = std::visit(
        overloaded{[&](const GevreyFlat& p) {
                       return w.kind == WeightKind::Gevrey && std::abs(w.s - p.s) < 1e-12;
                   },
                   [&](const IteratedExpFlat& p) {
                       return w.kind == WeightKind::RefinedGevrey && w.k == p.k &&
                              std::abs(w.s - p.s) < 1e-12;
                   },
                   [&](const LogPower& p) {
                       return w.kind == WeightKind::LogPower && std::abs(w.alpha - p.alpha) < 1e-12;
                   },
                   [&](const Intermediate& p) {
                       return w.kind == WeightKind::Intermediate && w.k == p.k &&
                              std::abs(w.alpha - p.alpha) < 1e-12;
                   },
                   [&](const auto&) { return false; }},
        spec.variant());
    if (!ok) throw MismatchError(spec.name() + " is not paired with " + weight_name(w));
    double pref = weight_prefactor(w);
    WeightConsistencyReport rep;
    for (double t : t_grid) {
        // Richardson-extrapolated central difference
        auto cd = [&](double h) {
            return (eval_phase(spec, t + h) - eval_phase(spec, t - h)) / (2.0 * h);
        };
        double h = 1e-4 * t;
        double d = (4.0 * cd(0.5 * h) - cd(h)) / 3.0;
        double lhs = d * pref * eval_weight(w, eval_phase(spec, t));
        double err = std::abs(lhs - 1.0 / t) * t;
        if (err > rep.max_rel_error) {
            rep.max_rel_error = err;
            rep.worst_t = t;
        }
    }
    rep.pass = rep.max_rel_error <= tol;
    return rep;
}

// ---------------------------------------------------------------- serialization

namespace {

using ojson = nlohmann::ordered_json;

ojson to_ojson(const PhaseSpec& spec) {
    ojson j;
    ojson params = ojson::object();
    std::string variant = std::visit(
        overloaded{[&](const PowerPhase& p) {
                       params["alpha"] = p.alpha;
                       return std::string("PowerPhase");
                   },
                   [&](const PlateauPhase& p) {
                       params["k"] = p.k;
                       params["j0"] = p.j0;
                       return std::string("PlateauPhase");
                   },
                   [&](const GevreyFlat& p) {
                       params["s"] = p.s;
                       return std::string("GevreyFlat");
                   },
                   [&](const IteratedExpFlat& p) {
                       params["k"] = p.k;
                       params["s"] = p.s;
                       return std::string("IteratedExpFlat");
                   },
                   [&](const LogPower& p) {
                       params["alpha"] = p.alpha;
                       return std::string("LogPower");
                   },
                   [&](const Intermediate& p) {
                       params["k"] = p.k;
                       params["alpha"] = p.alpha;
                       params["delta"] = p.delta;
                       return std::string("Intermediate");
                   },
                   [&](const Polynomial& p) {
                       params["coefficients"] = p.coefficients;
                       return std::string("Polynomial");
                   }},
        spec.variant());
    params["domain_radius"] = spec.domain_radius();
    j["variant"] = variant;
    j["params"] = params;
    return j;
}

template <class T>
T get_or(const ojson& p, const char* key, T dflt) {
    if (!p.contains(key)) return dflt;
    return p.at(key).get<T>();
}

PhaseSpec from_ojson(const ojson& j) {
    if (!j.is_object() || !j.contains("variant"))
        throw ConfigError("phase JSON must be an object with a \"variant\" key");
    std::string v = j.at("variant").get<std::string>();
    ojson p = j.contains("params") ? j.at("params") : ojson::object();
    double r = get_or<double>(p, "domain_radius", -1.0);
    if (v == "PowerPhase") return PhaseSpec::power(get_or<int>(p, "alpha", 1), r < 0 ? 1.0 : r);
    if (v == "PlateauPhase") return PhaseSpec::plateau(get_or<int>(p, "k", 2), get_or<int>(p, "j0", -1));
    if (v == "GevreyFlat") return PhaseSpec::gevrey(get_or<double>(p, "s", 2.0), r < 0 ? 1.0 : r);
    if (v == "IteratedExpFlat")
        return PhaseSpec::iterated_exp(get_or<int>(p, "k", 1), get_or<double>(p, "s", 2.0),
                                       r < 0 ? 1.0 : r);
    if (v == "LogPower") return PhaseSpec::log_power(get_or<double>(p, "alpha", 2.0), r);
    if (v == "Intermediate")
        return PhaseSpec::intermediate(get_or<int>(p, "k", 2), get_or<double>(p, "alpha", 1.0));
    if (v == "Polynomial")
        return PhaseSpec::polynomial(p.at("coefficients").get<std::vector<double>>(),
                                     r < 0 ? 1.0 : r);
    throw ConfigError("unknown phase variant: " + v);
}

}  // namespace

std::string phase_to_json(const PhaseSpec& spec) { return to_ojson(spec).dump(); }

PhaseSpec phase_from_json(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("phase JSON: ") + e.what());
    }
    try {
        return from_ojson(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("phase JSON: ") + e.what());
    }
}

PhaseSpec parse_phase(const std::string& text) {
    if (!text.empty() && text[0] == '{') return phase_from_json(text);
    std::string head = text.substr(0, text.find(':'));
    std::string rest = text.find(':') == std::string::npos ? "" : text.substr(text.find(':') + 1);
    ojson params = ojson::object();
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("phase parameter without '=': " + item);
        std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        try {
            if (key == "c") {
                std::vector<double> c;
                std::stringstream cs(val);
                std::string x;
                while (std::getline(cs, x, ';')) c.push_back(std::stod(x));
                params["coefficients"] = c;
            } else if (key == "radius") {
                params["domain_radius"] = std::stod(val);
            } else if (key == "k" || key == "j0") {
                params[key] = std::stoi(val);
            } else if (key == "alpha" && head == "power") {
                params[key] = std::stoi(val);
            } else {
                params[key] = std::stod(val);
            }
        } catch (const std::logic_error&) {
            throw ConfigError("bad numeric value in phase spec: " + item);
        }
    }
    static const std::pair<const char*, const char*> names[] = {
        {"power", "PowerPhase"},       {"plateau", "PlateauPhase"},   {"gevrey", "GevreyFlat"},
        {"iterexp", "IteratedExpFlat"}, {"logpower", "LogPower"},     {"intermediate", "Intermediate"},
        {"poly", "Polynomial"}};
    for (auto& [shortname, full] : names) {
        if (head == shortname || head == full) {
            ojson j;
            j["variant"] = full;
            j["params"] = params;
            try {
                return from_ojson(j);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(std::string("phase spec: ") + e.what());
            }
        }
    }
    throw ConfigError("unknown phase name: " + head);
}

}  // namespace oscillab
