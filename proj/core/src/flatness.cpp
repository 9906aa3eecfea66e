#include "oscillab/flatness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oscillab/errors.hpp"

namespace oscillab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kChainCap = 8000;

// b scaled up by the relative factor (1 + tol), in log space.
LogMag relax(const LogMag& b, double tol) {
    if (std::isfinite(b.lv)) return LogMag::from_log(b.lv + std::log1p(tol));
    if (std::isfinite(b.llv)) return LogMag::from_loglog(b.llv + std::log1p(-tol));
    return b;
}

}  // namespace

std::string method_name(FlatMethod m) {
    switch (m) {
        case FlatMethod::Bang: return "bang";
        case FlatMethod::TaylorLegendre: return "taylor_legendre";
        case FlatMethod::ClosedForm: return "closed_form";
    }
    return "?";
}

BangLevel bang_level(const CarlemanFamily& M, double K, double x) {
    if (!(K > 0.0) || !(x > 0.0) || !(x < 1.0)) throw DomainError("bang_level needs K > 0, 0 < x < 1");
    BangLevel out;
    if (tail(M, 1).diverges) {
        out.infinite = true;
        out.index.log_n = kInf;
        out.index.loglog_n = kInf;
        return out;
    }
    out.index = strict_tail_index(M, 4.0 * K * x);
    return out;
}

FlatBoundCertificate bang_bound(const CarlemanFamily& M, double K, double A0, double x) {
    if (!(A0 > 0.0)) throw DomainError("bang_bound needs A0 > 0");
    FlatBoundCertificate c;
    c.method = FlatMethod::Bang;
    c.t = x;
    c.K = K;
    c.c = 1.0 / (4.0 * K);
    c.C = 2.0 * A0;
    c.level = bang_level(M, K, x);
    if (c.level.infinite) {
        c.bound = LogMag{};
        return c;
    }
    const double ln2 = std::log(2.0);
    if (c.level.index.exact) {
        c.bound = LogMag::from_log(std::log(A0) - static_cast<double>(*c.level.index.exact) * ln2);
        return c;
    }
    // l known only through log l: the bound is 2^-l up to the factor A0
    double l = std::exp(c.level.index.log_n);
    if (std::isfinite(l) && l < 1e300)
        c.bound = LogMag::from_log(std::log(A0) - l * ln2);
    else
        c.bound = LogMag::from_loglog(c.level.index.log_n + std::log(ln2));
    return c;
}

FlatBoundCertificate taylor_legendre_certificate(const CarlemanFamily& M, double K, double t) {
    FlatBoundCertificate c;
    c.method = FlatMethod::TaylorLegendre;
    c.t = t;
    c.K = K;
    c.bound = taylor_legendre_bound_log(M, K, t);
    LegendreResult r = legendre(M, -std::log(K * std::abs(t)));
    c.argmax = r.asymptotic ? -1 : r.argmax.front();
    c.log_argmax = r.log_argmax;
    return c;
}

std::vector<double> bang_sequence(const CarlemanFamily& M, double K, int n_max) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n)
        out.push_back(std::log(2.0) + (n + 1) * std::log(K) + M.logM(n));
    return out;
}

ChainResult bang_chain_oracle(const std::vector<double>& logA, double x, int ell) {
    if (logA.empty() || ell < 0 || !(x > 0.0)) throw DomainError("bang_chain_oracle: bad arguments");
    const std::size_t size = logA.size();
    std::vector<double> logeta(size, 0.0);
    for (std::size_t j = 1; j < size; ++j) {
        logeta[j] = logA[j] - logA[j - 1];
        if (j >= 2 && logeta[j] < logeta[j - 1] - 1e-12 * std::max(1.0, std::abs(logeta[j - 1])))
            throw DomainError("bang_chain_oracle: eta_j = A_j/A_{j-1} is not nondecreasing at j = " +
                              std::to_string(j));
    }
    ChainResult out;
    if (ell == 0) {
        out.log_bound = logA[0];
        out.log_claim = logA[0];
        return out;
    }
    // close the chain: sum_{j=l}^n 1/eta_j >= 4x
    double S = 0.0;
    std::int64_t n = -1;
    for (std::size_t j = static_cast<std::size_t>(ell); j < size && j <= kChainCap; ++j) {
        S += std::exp(-logeta[j]);
        if (S >= 4.0 * x) {
            n = static_cast<std::int64_t>(j);
            break;
        }
    }
    if (n < 0) throw ChainFailed("bang_chain_oracle: the quotient sum does not reach 4x");
    const double a = x / S;
    const double loga = std::log(a);
    // G(p, q+1) in prev, G(p, q) in cur; p runs downward so G(p+1, q) is ready
    std::vector<double> prev(static_cast<std::size_t>(n) + 2, -kInf), cur(prev.size(), -kInf);
    for (std::int64_t q = n; q >= ell; --q) {
        cur[static_cast<std::size_t>(q)] = logA[static_cast<std::size_t>(q)];
        for (std::int64_t p = q - 1; p >= 0; --p) {
            auto pi = static_cast<std::size_t>(p);
            double step = loga - logeta[static_cast<std::size_t>(q)] + cur[pi + 1];
            double v = prev[pi] == -kInf ? step : log_add(prev[pi], step);
            cur[pi] = std::min(logA[pi], v);
        }
        std::swap(prev, cur);
        std::fill(cur.begin(), cur.end(), -kInf);
    }
    out.log_bound = prev[0];
    out.log_claim = logA[0] + ell * std::log(2.0 * a);
    out.n = n;
    out.a = a;
    return out;
}

namespace {

void pick_winner(CompareRow& row) {
    if (less(row.bang, row.tl))
        row.winner = "bang";
    else if (less(row.tl, row.bang))
        row.winner = "taylor_legendre";
    else
        row.winner = "tie";
}

}  // namespace

CompareTable rank_bounds(const CarlemanFamily& M, double K, const std::vector<double>& t_grid) {
    CompareTable table;
    table.K = K;
    table.A0 = 2.0 * K * std::exp(M.logM(0));
    for (double t : t_grid) {
        CompareRow row;
        row.t = t;
        row.bang = bang_bound(M, K, table.A0, t).bound;
        row.tl = taylor_legendre_certificate(M, K, t).bound;
        pick_winner(row);
        table.rows.push_back(row);
    }
    return table;
}

CompareTable compare_methods(const CarlemanFamily& M, double K, bool K_verified,
                             const PhaseSpec& spec, const std::vector<double>& t_grid, double tol) {
    if (!K_verified) throw DomainError("compare_methods needs K from a stable membership run");
    if (!spec.flat()) throw DomainError("compare_methods needs a phase flat at 0");
    CompareTable table;
    table.K = K;
    table.A0 = 2.0 * K * std::exp(M.logM(0));
    for (double t : t_grid) {
        CompareRow row;
        row.t = t;
        row.actual = log_abs_phi(spec, t);
        row.bang = bang_bound(M, K, table.A0, t).bound;
        row.tl = taylor_legendre_certificate(M, K, t).bound;
        if (!less_equal(row.actual, relax(row.bang, tol)))
            throw ClassMismatch("|phi(t)| exceeds the Bang bound at t = " + std::to_string(t));
        if (!less_equal(row.actual, relax(row.tl, tol)))
            throw ClassMismatch("|phi(t)| exceeds the Taylor-Legendre bound at t = " +
                                std::to_string(t));
        pick_winner(row);
        table.rows.push_back(row);
    }
    return table;
}

int ordering_prefix(const CompareTable& table, const std::string& winner, double& t_star) {
    std::vector<const CompareRow*> rows;
    for (auto& r : table.rows) rows.push_back(&r);
    std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->t < b->t; });
    int count = 0;
    t_star = 0.0;
    for (auto* r : rows) {
        if (r->winner != winner) break;
        ++count;
        t_star = r->t;
    }
    return count;
}

}  // namespace oscillab
