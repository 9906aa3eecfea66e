#include "oscillab/ladder.hpp"

#include <cmath>

#include "oscillab/errors.hpp"
#include "oscillab/iterlog.hpp"

namespace oscillab {

int minimal_j0(int k) {
    if (k < 2) throw InvalidJ0("ladder requires k >= 2");
    for (int j0 = 0; j0 < 1000000; ++j0) {
        if (iter_log(k - 2, 1.0 + j0) >= 2.0) return j0;
    }
    throw InvalidJ0("no j0 below 1e6 satisfies the iterated-log guard");
}

double ladder_q_double(int k, int j0, int j) {
    return 2.0 * std::floor(iter_log(k - 2, static_cast<double>(j) + j0)) + 1.0;
}

OddProductLadder build_ladder(int k, int j0, int n_max) {
    if (k < 2) throw InvalidJ0("ladder requires k >= 2");
    if (j0 < 0 || iter_log(k - 2, 1.0 + j0) < 2.0)
        throw InvalidJ0("log^(k-2)(1 + j0) must be >= 2");
    if (n_max < 0) throw InvalidJ0("n_max must be nonnegative");
    OddProductLadder L;
    L.k = k;
    L.j0 = j0;
    L.Q.push_back(BigInt(1));
    for (int j = 1; j <= n_max; ++j) {
        // floor of log^(k-2); exact integer arithmetic when k == 2
        BigInt fl;
        if (k == 2) {
            fl = BigInt(j) + j0;
        } else {
            fl = BigInt(static_cast<long long>(
                std::floor(iter_log(k - 2, static_cast<double>(j) + j0))));
        }
        BigInt qj = 2 * fl + 1;
        L.q.push_back(qj);
        L.Q.push_back(L.Q.back() * qj);
    }
    return L;
}

bool verify_plateau_parity(const OddProductLadder& L, int n) {
    if (n < 0 || n > L.n_max()) return false;
    const BigInt& Qn = L.Q_at(n);
    for (int j = 1; j <= n; ++j) {
        const BigInt& Qj = L.Q_at(j);
        if (Qj == 0) return false;
        BigInt quot, rem;
        boost::multiprecision::divide_qr(Qn, Qj, quot, rem);
        if (rem != 0) return false;
        if (!boost::multiprecision::bit_test(quot, 0)) return false;
    }
    return true;
}

double log_big(const BigInt& v) {
    if (v <= 0) throw DomainError("log_big: nonpositive argument");
    std::size_t bits = boost::multiprecision::msb(v) + 1;
    if (bits <= 64) return std::log(static_cast<double>(static_cast<unsigned long long>(v)));
    std::size_t shift = bits - 64;
    unsigned long long top = static_cast<unsigned long long>(v >> shift);
    return std::log(static_cast<double>(top)) + static_cast<double>(shift) * std::log(2.0);
}

double to_double_big(const BigInt& v) { return v.convert_to<double>(); }

std::string to_decimal(const BigInt& v) { return v.str(); }

}  // namespace oscillab
