#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace oscillab {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Odd multipliers q_j = 2 floor(log^(k-2)(j + j0)) + 1 and their running
// products Q_n, which double as the frequencies lambda_n = Q_n.
struct OddProductLadder {
    int k = 2;
    int j0 = 1;
    std::vector<BigInt> q;  // q[j-1] = q_j
    std::vector<BigInt> Q;  // Q[n] = Q_n, Q[0] = 1

    int n_max() const { return static_cast<int>(q.size()); }
    const BigInt& q_at(int j) const { return q.at(j - 1); }
    const BigInt& Q_at(int n) const { return Q.at(n); }
};

// Smallest j0 >= 0 with log^(k-2)(1 + j0) >= 2.
int minimal_j0(int k);

// q_j in floating point; valid for any j, used for shells beyond n_max.
double ladder_q_double(int k, int j0, int j);

OddProductLadder build_ladder(int k, int j0, int n_max);

// True iff Q_n / Q_j is an odd integer for every 1 <= j <= n.
bool verify_plateau_parity(const OddProductLadder& L, int n);

// Natural log of a positive big integer from its bit length plus a 64-bit
// mantissa.
double log_big(const BigInt& v);
double to_double_big(const BigInt& v);
std::string to_decimal(const BigInt& v);

}  // namespace oscillab
