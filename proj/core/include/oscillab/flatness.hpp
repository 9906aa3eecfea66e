#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oscillab/carleman.hpp"
#include "oscillab/numerics.hpp"
#include "oscillab/phases.hpp"

namespace oscillab {

// Largest l with T_M(l) > 4 K x. infinite marks a quasianalytic family
// (phi vanishes identically); level 0 means no decay is certified.
struct BangLevel {
    bool infinite = false;
    TailIndex index;
};

BangLevel bang_level(const CarlemanFamily& M, double K, double x);

enum class FlatMethod { Bang, TaylorLegendre, ClosedForm };
std::string method_name(FlatMethod m);

struct FlatBoundCertificate {
    FlatMethod method = FlatMethod::Bang;
    double t = 0.0;
    LogMag bound;
    BangLevel level;               // Bang
    std::int64_t argmax = 0;       // TaylorLegendre: smallest maximizer, -1 past 2^62
    double log_argmax = 0.0;
    double K = 0.0, c = 0.0, C = 0.0;
};

// A0 2^-l with the constants of the flat-point proposition: c = 1/(4K), C = 2 A0.
FlatBoundCertificate bang_bound(const CarlemanFamily& M, double K, double A0, double x);
FlatBoundCertificate taylor_legendre_certificate(const CarlemanFamily& M, double K, double t);

struct ChainResult {
    double log_bound = 0.0;   // log F(0, l) from the recursion table
    double log_claim = 0.0;   // log(A_0 (2a)^l)
    std::int64_t n = 0;       // closing index of the chain
    double a = 0.0;
};

// Runs the chain-of-intervals recursion
//   F(p,q) <= min(A_p, F(p,q+1) + (a/eta_q) F(p+1,q)),  F(p, n+1) = 0,
// on logA[j] = log A_j. Throws DomainError when eta is not nondecreasing and
// ChainFailed when no n <= size-1 closes sum_{j=l}^n 1/eta_j >= 4x.
ChainResult bang_chain_oracle(const std::vector<double>& logA, double x, int ell);

// log A_n = log 2 + (n+1) log K + log M_n for n = 0..n_max.
std::vector<double> bang_sequence(const CarlemanFamily& M, double K, int n_max);

struct CompareRow {
    double t = 0.0;
    LogMag actual, bang, tl;
    std::string winner;  // "bang", "taylor_legendre" or "tie"
};

struct CompareTable {
    std::vector<CompareRow> rows;
    double K = 0.0;
    double A0 = 0.0;
};

// K must come from a membership run that was judged stable; compare_methods
// refuses otherwise. Throws ClassMismatch when |phi(t)| exceeds a bound.
CompareTable compare_methods(const CarlemanFamily& M, double K, bool K_verified,
                             const PhaseSpec& spec, const std::vector<double>& t_grid,
                             double tol = 1e-9);

// Both bounds and the tighter one per t, without the domination check
// (actual is left at zero). Useful when K is known only as a lower estimate.
CompareTable rank_bounds(const CarlemanFamily& M, double K, const std::vector<double>& t_grid);

// Longest run of consecutive grid points, starting from the smallest t, on
// which `winner` holds. Returns the count and sets t_star to its last t.
int ordering_prefix(const CompareTable& table, const std::string& winner, double& t_star);

}  // namespace oscillab
