#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "oscillab/numerics.hpp"

namespace oscillab {

// psi(t) = max(t^(alpha+1), 0)
struct PowerPhase {
    int alpha = 1;
};

// psi(t) = sum_j a_j eta(2^j t), a_j = pi / Q_j
struct PlateauPhase {
    int k = 2;
    int j0 = 1;
};

// psi(t) = exp(-t^(-a)), a = 1/(s-1)
struct GevreyFlat {
    double s = 2.0;
};

// psi(t) = exp(-E_k(t^(-a))), a = 1/(s-1)
struct IteratedExpFlat {
    int k = 1;
    double s = 2.0;
};

// psi(t) = exp(-(log 1/t)^beta), beta = alpha/(alpha-1)
struct LogPower {
    double alpha = 2.0;
};

// psi(t) = exp(-log(1/t) L_k(1/t)^(1/alpha)) on (0, delta)
struct Intermediate {
    int k = 2;
    double alpha = 1.0;
    double delta = 0.0;
};

// psi(t) = sum_i c_i t^i on both sides
struct Polynomial {
    std::vector<double> coefficients;
};

using PhaseVariant = std::variant<PowerPhase, PlateauPhase, GevreyFlat, IteratedExpFlat,
                                  LogPower, Intermediate, Polynomial>;

struct PlateauTable;

class PhaseSpec {
public:
    static PhaseSpec power(int alpha, double radius = 1.0);
    // j0 < 0 selects the minimal admissible j0.
    static PhaseSpec plateau(int k, int j0 = -1);
    static PhaseSpec gevrey(double s, double radius = 1.0);
    static PhaseSpec iterated_exp(int k, double s, double radius = 1.0);
    static PhaseSpec log_power(double alpha, double radius = -1.0);  // default 1/e
    static PhaseSpec intermediate(int k, double alpha);
    static PhaseSpec polynomial(std::vector<double> coefficients, double radius = 1.0);

    const PhaseVariant& variant() const { return v_; }
    double domain_radius() const { return radius_; }
    std::string name() const;

    bool one_sided() const;
    bool flat() const;
    bool analytic_off_origin() const;
    // Monotone one-sided variants with a closed-form inverse of psi.
    bool has_inverse() const;

    const PlateauTable* plateau_table() const { return plateau_.get(); }

private:
    PhaseSpec(PhaseVariant v, double radius) : v_(std::move(v)), radius_(radius) {}
    PhaseVariant v_;
    double radius_;
    std::shared_ptr<const PlateauTable> plateau_;
};

// Shell amplitudes for the plateau phase in double precision.
struct PlateauTable {
    int k = 2;
    int j0 = 1;
    std::vector<double> a;     // a[j] = pi/Q_j, a[0] unused
    std::vector<double> logQ;  // logQ[j] = log Q_j
};

// Smooth step S(y) with S = 0 for y <= 0 and S = 1 for y >= 1.
double smooth_step(double y);
// eta(x) = S(10(x - 1/2)) S(5(1 - x)); 1 on [3/5, 4/5], 0 outside (1/2, 1).
double bump(double x);

double eval_phase(const PhaseSpec& spec, double t);
double eval_phi(const PhaseSpec& spec, double t);

// log psi(t) for t > 0 with the log(-log) companion; survives underflow.
LogMag log_phase(const PhaseSpec& spec, double t);
// |phi(t)| in log space.
LogMag log_abs_phi(const PhaseSpec& spec, double t);

// Analytic continuation off the origin (Re z > 0 for flat variants).
// log_phase_complex returns log psi(z) on the principal branch.
cplx log_phase_complex(const PhaseSpec& spec, cplx z);
cplx eval_phase_complex(const PhaseSpec& spec, cplx z);

// For has_inverse() variants: the t with log psi(t) = log_y, together with the
// logarithmic derivative D(t) = t psi'(t) / psi(t).
struct InversePoint {
    double t;
    double elasticity;
};
InversePoint phase_inverse(const PhaseSpec& spec, double log_y);
double phase_elasticity(const PhaseSpec& spec, double t);

// Upper bound on int_0^a |e^{i lam psi(t)} - e^{i lam psi(-t)}| dt/t, from
// |e^{ix} - e^{iy}| <= |x - y|.
double truncation_bound(const PhaseSpec& spec, double lam, double a);

// Intermediate helpers: Q(u) = u L_{k-1}(u)^(1/alpha) and Q'(u).
double intermediate_Q(int k, double alpha, double u);
double intermediate_Qprime(int k, double alpha, double u);
// Inverse of Q on the region L_{k-1}(u) >= 2.
double intermediate_Q_inverse(int k, double alpha, double q);

// ---- substitution weights ----

enum class WeightKind { Gevrey, RefinedGevrey, LogPower, Intermediate };

struct SubstitutionWeight {
    WeightKind kind = WeightKind::Gevrey;
    int k = 1;
    double s = 2.0;
    double alpha = 2.0;
    double u0 = 0.0;
};

SubstitutionWeight gevrey_weight(double s, double u0 = -1.0);
SubstitutionWeight refined_gevrey_weight(int k, double s, double u0 = -1.0);
SubstitutionWeight log_power_weight(double alpha, double u0 = -1.0);
SubstitutionWeight intermediate_weight(int k, double alpha, double u0 = -1.0);

// Weight paired with a phase, with u0 = psi(domain_radius).
SubstitutionWeight matched_weight(const PhaseSpec& spec);
double weight_prefactor(const SubstitutionWeight& w);
std::string weight_name(const SubstitutionWeight& w);

double eval_weight(const SubstitutionWeight& w, double u);

struct WeightConsistencyReport {
    double max_rel_error = 0.0;
    double worst_t = 0.0;
    bool pass = false;
};
WeightConsistencyReport weight_consistency(const PhaseSpec& spec, const SubstitutionWeight& w,
                                           const std::vector<double>& t_grid,
                                           double tol = 1e-6);

// ---- serialization ----

// {"variant": string, "params": {...}} with a stable key order.
std::string phase_to_json(const PhaseSpec& spec);
PhaseSpec phase_from_json(const std::string& text);
// Short form used on the command line, e.g. "gevrey:s=2" or "poly:c=0;1;0;1".
PhaseSpec parse_phase(const std::string& text);

}  // namespace oscillab
