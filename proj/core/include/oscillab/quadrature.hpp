#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oscillab/errors.hpp"
#include "oscillab/ladder.hpp"
#include "oscillab/numerics.hpp"
#include "oscillab/phases.hpp"

namespace oscillab {

struct QuadratureConfig {
    double rel_tol = 1e-8;          // per panel, against the panel's L1 mass
    int panels_per_period = 8;      // panels per 2 pi of phase
    int max_shells = 4000;
    double tail_epsilon = 1e-12;    // truncated mass near the origin
    std::int64_t max_nodes = 400'000'000'000LL;

    void validate() const;
};

struct QuadratureReport {
    cplx value{0.0, 0.0};
    double est_error = 0.0;
    std::int64_t nodes_used = 0;
    int shells_used = 0;
    std::string strategy = "zero";
    double truncation_bound = 0.0;
};

class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& what, QuadratureReport partial)
        : Error("BudgetExceeded", what), partial_(std::move(partial)) {}
    const QuadratureReport& partial() const { return partial_; }

private:
    QuadratureReport partial_;
};

// m(lam) = int_0^r (e^{i lam psi(t)} - e^{i lam psi(-t)}) dt/t on dyadic shells.
QuadratureReport compute_m_direct(const PhaseSpec& spec, double lam,
                                  const QuadratureConfig& cfg = {});

// Exact-integer frequency lam = Q_n for the plateau phase built on L. The
// phase is reduced mod 2 pi through the integers Q_n / Q_j.
QuadratureReport compute_m_direct(const PhaseSpec& plateau, const OddProductLadder& L, int n,
                                  const QuadratureConfig& cfg = {});

// prefactor * int_0^{u0} (e^{i lam u} - 1) w(u) du.
QuadratureReport compute_m_substituted(const SubstitutionWeight& w, double prefactor, double lam,
                                       const QuadratureConfig& cfg = {});

struct VdcShell {
    int j = 0;
    double t_j = 0.0;
    double Lambda = 0.0;
    double abs_J = 0.0;
    double est_error = 0.0;
};

// Lowest order k with phi^(k)(0) != 0; 0 when phi vanishes identically.
int vanishing_order(const PhaseSpec& spec, int cap = 40);

// J_j(lam) = int_{1/2}^1 (e^{i lam psi(t_j s)} - e^{i lam psi(-t_j s)}) ds/s with
// t_j = r 2^-j and Lambda_j = lam t_j^k.
std::vector<VdcShell> vdc_shell_values(const PhaseSpec& spec, double lam, int j_lo, int j_hi,
                                       const QuadratureConfig& cfg = {});

struct VdcRow {
    double lambda = 0.0;
    VdcShell shell;
    double envelope = 0.0;  // min{Lambda, Lambda^(-1/k)}
    double ratio = 0.0;     // |J_j| / envelope
};

struct VdcCheck {
    int k = 0;
    double fit_lambda = 0.0;
    double max_fit_ratio = 0.0;
    double C = 0.0;  // safety * max_fit_ratio
    std::vector<VdcRow> rows;  // the check frequencies only
    bool pass = false;         // every check row within C, and C <= C_max
};

// Fits C once at fit_lambda and reuses it at every check frequency. The
// ratio is a fixed function of Lambda_j, but the check frequencies sample it
// on a different Lambda lattice, hence the safety factor.
VdcCheck vdc_check(const PhaseSpec& spec, double fit_lambda, const std::vector<double>& check_lambdas,
                   int j_lo = 0, int j_hi = 20, double safety = 2.0, double C_max = 10.0,
                   const QuadratureConfig& cfg = {});

// Certified lower bound on -Re m(lam) for one-sided phases.
double certified_nonneg_realpart(const PhaseSpec& spec, double lam);
// Exact-frequency variant for the plateau phase: sums the plateaus J_j, j <= n.
double certified_nonneg_realpart(const PhaseSpec& plateau, const OddProductLadder& L, int n);

}  // namespace oscillab
