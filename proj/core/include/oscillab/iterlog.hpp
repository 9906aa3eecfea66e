#pragma once

namespace oscillab {

// k-fold logarithm; log^(0) is the identity. Throws DomainError when an
// intermediate value is not positive.
double iter_log(int k, double x);

// k-fold exponential E_k. Throws Overflow past double range; use
// iter_exp_log for the log-space value log E_k(x) = E_{k-1}(x).
double iter_exp(int k, double x);
double iter_exp_log(int k, double x);

}  // namespace oscillab
