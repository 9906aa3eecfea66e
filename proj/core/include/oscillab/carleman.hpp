#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oscillab/numerics.hpp"

namespace oscillab {

enum class FamilyKind { Gevrey, RefinedGevrey, ExpPower, IterExpPower, Tabulated };

// Log-convex weight sequence M_n, stored through log M_n. Closed forms use
// K = 1:
//   Gevrey(s)            M_n = (n!)^s
//   RefinedGevrey(k, s)  M_n = n! Q(n)^n, Q(n) = (log^(k) n)^s prod_{j<k} log^(j) n
//   ExpPower(c, a)       M_n = exp(c n^a)
//   IterExpPower(k,c,a)  M_n = E_k(c n^a)
// RefinedGevrey is only specified for large n; below the start index n1 it
// continues as n! Q(n1)^n, which keeps M_0 = 1 and the quotients increasing.
class CarlemanFamily {
public:
    static CarlemanFamily gevrey(double s);
    static CarlemanFamily refined_gevrey(int k, double s);
    static CarlemanFamily exp_power(double c, double alpha);
    static CarlemanFamily iter_exp_power(int k, double c, double alpha);
    // logM[n] = log M_n for n = 0..size-1.
    static CarlemanFamily tabulated(std::vector<double> logM);

    FamilyKind kind() const { return kind_; }
    std::string name() const;
    int k() const { return k_; }
    double s() const { return s_; }
    double c() const { return c_; }
    double alpha() const { return alpha_; }

    // Start index of log-convexity.
    std::int64_t n1() const { return n1_; }
    // Largest n with a known M_n.
    std::int64_t n_limit() const;

    double logM(std::int64_t n) const;
    // log mu_n = log M_n - log M_{n-1}, n >= 1.
    double logmu(std::int64_t n) const;
    // Phi(n) = log(M_n / n!), evaluated without cancellation where possible.
    double phi(std::int64_t n) const;
    // Phi(n+1) - Phi(n) = log mu_{n+1} - log(n+1).
    double phi_increment(std::int64_t n) const;

    // Continuous extension of log mu for the tail integrals (x >= n1 + 1).
    double logmu_cont(double x) const;

private:
    CarlemanFamily() = default;
    FamilyKind kind_ = FamilyKind::Gevrey;
    int k_ = 1;
    double s_ = 1.0, c_ = 1.0, alpha_ = 1.0;
    std::int64_t n1_ = 1;
    double logQ1_ = 0.0;  // log Q(n1) for RefinedGevrey
    std::vector<double> table_;
};

struct TailValue {
    bool diverges = false;
    double value = 0.0;  // T_M(N) when finite
    double err = 0.0;    // certified half-width of the bracket
};

// T_M(N) = sum_{j >= N} 1/mu_j.
TailValue tail(const CarlemanFamily& M, std::int64_t N);

// Position of N_M(r) = sup{N : T_M(N) >= r}. exact is set when N fits in
// int64; otherwise only the log-space coordinates are known.
struct TailIndex {
    std::optional<std::int64_t> exact;
    double log_n = 0.0;
    double loglog_n = 0.0;
};

std::int64_t inverse_tail(const CarlemanFamily& M, double r);
TailIndex inverse_tail_index(const CarlemanFamily& M, double r);
// Same search with the strict condition T_M(N) > r; 0 when no N qualifies.
TailIndex strict_tail_index(const CarlemanFamily& M, double r);

enum class Tristate { False, True, Unknown };
Tristate quasianalytic(const CarlemanFamily& M);

struct LegendreResult {
    double value = 0.0;
    std::vector<std::int64_t> argmax;  // ascending; ties included; empty when asymptotic
    // Set when the maximizer lies beyond 2^62 ((refined) Gevrey only): the
    // value then comes from the continuous stationary point and is known
    // through log_value, with log_argmax = log of the maximizer.
    bool asymptotic = false;
    double log_value = 0.0;
    double log_argmax = 0.0;
};

// Phi*(y) = sup_{n >= 1} (n y - Phi(n)). An explicit n_budget below the
// default turns the asymptotic fallback into BudgetExhausted.
LegendreResult legendre(const CarlemanFamily& M, double y,
                        std::int64_t n_budget = std::int64_t{1} << 62);

// K exp(-Phi*(log 1/(K|t|))) for 0 < |t| <= 1/K, in log space.
LogMag taylor_legendre_bound_log(const CarlemanFamily& M, double K, double t);
double taylor_legendre_bound(const CarlemanFamily& M, double K, double t);

// sum_{N >= N0} min{1, c lam 2^-N} log(T(N) / T(N+1)).
double shellsum_upper(const CarlemanFamily& M, double lam, double c = 1.0, std::int64_t N0 = 1);

std::string family_to_json(const CarlemanFamily& M);
// Short form "gevrey:s=2", "refined:k=2,s=2", "exppower:c=1,alpha=2",
// "iterexp:k=2,c=1,alpha=1", or a JSON object.
CarlemanFamily parse_family(const std::string& text);

}  // namespace oscillab
