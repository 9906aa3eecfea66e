#include "oscillab/plateau.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oscillab/errors.hpp"
#include "oscillab/iterlog.hpp"

namespace oscillab {
namespace {

const double kPi = std::acos(-1.0);

double rational_to_double(const BigRational& r) { return r.convert_to<double>(); }

}  // namespace

double plateau_lower_bound(int n) {
    if (n < 0) throw DomainError("plateau_lower_bound needs n >= 0");
    return 2.0 * n * std::log(4.0 / 3.0);
}

PlateauUpper plateau_upper_bound_detail(const OddProductLadder& L, int n) {
    if (n < 0 || n > L.n_max()) throw DomainError("plateau_upper_bound: n outside the ladder");
    PlateauUpper out;
    out.head = 2.0 * n * std::log(2.0);
    // term_j = Q_n / Q_j = 1 / (q_{n+1} ... q_j)
    const BigInt cutoff("1000000000000000000");
    BigRational sum = 0;
    BigInt den = 1;
    int j = n;
    auto q_of = [&](int idx) -> BigInt {
        if (idx <= L.n_max()) return L.q_at(idx);
        return BigInt(static_cast<long long>(ladder_q_double(L.k, L.j0, idx)));
    };
    do {
        ++j;
        den *= q_of(j);
        sum += BigRational(1, den);
        ++out.terms;
    } while (den <= cutoff);
    // later terms shrink at least by 1/q_{j+1} each
    BigInt qn = q_of(j + 1);
    BigRational rem(BigInt(1), den * (qn - 1));
    out.tail_sum = rational_to_double(sum);
    out.remainder = rational_to_double(rem);
    const double eps = 8.0 * std::numeric_limits<double>::epsilon();
    out.value = (out.head + kPi * std::log(2.0) * (out.tail_sum + out.remainder)) * (1.0 + eps);
    return out;
}

double plateau_upper_bound(const OddProductLadder& L, int n) {
    return plateau_upper_bound_detail(L, n).value;
}

GrowthWindowReport verify_growth_window(const OddProductLadder& L, const PhaseSpec& spec, int n,
                                        const GrowthWindowConfig& cfg) {
    if (n < 1 || n > L.n_max()) throw DomainError("verify_growth_window: n outside the ladder");
    GrowthWindowReport r;
    r.n = n;
    r.Q_n = to_decimal(L.Q_at(n));
    BigInt total = 0;
    for (int j = 1; j <= n; ++j) total += L.Q_at(n) / L.Q_at(j);
    r.oscillations = to_double_big(total);
    r.lower = plateau_lower_bound(n);
    r.upper = plateau_upper_bound(L, n);
    r.certified = certified_nonneg_realpart(spec, L, n);
    r.mode = "certified";
    if (r.oscillations <= cfg.oscillation_cap) {
        try {
            QuadratureReport q = compute_m_direct(spec, L, n, cfg.quad);
            r.mode = "full";
            r.neg_re = -q.value.real();
            r.abs_m = std::abs(q.value);
            r.est_error = q.est_error;
        } catch (const BudgetExceeded& e) {
            r.note = std::string("full quadrature over budget: ") + e.what();
        }
    } else {
        r.note = "oscillation count above the full-quadrature cap";
    }
    if (r.mode == "full") {
        r.lower_ok = r.neg_re >= r.lower - cfg.tol;
        r.upper_ok = r.abs_m <= r.upper + cfg.tol;
    } else {
        r.lower_ok = r.certified >= r.lower - cfg.tol;
    }
    r.pass = r.lower_ok && r.upper_ok;
    return r;
}

RatioReport ratio_law(const OddProductLadder& L, int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi > L.n_max() || n_lo > n_hi) throw DomainError("ratio_law: bad n range");
    RatioReport out;
    out.lo = std::numeric_limits<double>::infinity();
    out.hi = 0.0;
    for (int n = n_lo; n <= n_hi; ++n) {
        RatioRow row;
        row.n = n;
        row.log_Q = log_big(L.Q_at(n));
        // log^(k) Q = log^(k-1) of log Q
        double lk = iter_log(L.k - 1, row.log_Q);
        row.ratio = n / (row.log_Q / lk);
        out.lo = std::min(out.lo, row.ratio);
        out.hi = std::max(out.hi, row.ratio);
        out.rows.push_back(row);
    }
    out.pass = out.lo >= 0.1 && out.hi <= 10.0;
    return out;
}

SmoothnessReport smoothness_proxy(int k, int j0, int m_max, int j_max, int j_check) {
    if (m_max < 1 || j_max < 1 || j_check < j_max) throw DomainError("smoothness_proxy: bad ranges");
    OddProductLadder L = build_ladder(k, j0, j_check + 1);
    SmoothnessReport out;
    out.j_max = j_max;
    out.j_check = j_check;
    out.pass = true;
    const double ln2 = std::log(2.0);
    for (int m = 1; m <= m_max; ++m) {
        SmoothnessRow row;
        row.m = m;
        row.log_peak = -std::numeric_limits<double>::infinity();
        for (int j = 1; j <= j_max; ++j) {
            double v = j * m * ln2 - log_big(L.Q_at(j));
            if (v > row.log_peak) {
                row.log_peak = v;
                row.argpeak = j;
            }
        }
        const BigInt pow2 = BigInt(1) << m;
        for (int j = 1; j <= j_check; ++j)
            if (L.q_at(j + 1) > pow2) {
                row.turnover = j;
                break;
            }
        // 2^{(j+1)m} Q_j < 2^{jm} Q_{j+1}  <=>  2^m < q_{j+1}
        row.decays = row.turnover > 0;
        for (int j = std::max(row.turnover, 1); row.decays && j < j_check; ++j) {
            BigInt lhs = (BigInt(1) << ((j + 1) * m)) * L.Q_at(j);
            BigInt rhs = (BigInt(1) << (j * m)) * L.Q_at(j + 1);
            if (!(lhs < rhs)) row.decays = false;
        }
        out.pass = out.pass && row.decays;
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace oscillab
