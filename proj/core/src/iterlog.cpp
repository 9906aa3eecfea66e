#include "oscillab/iterlog.hpp"

#include <cmath>
#include <string>

#include "oscillab/errors.hpp"

namespace oscillab {

double iter_log(int k, double x) {
    if (k < 0) throw DomainError("iter_log: negative order");
    for (int i = 0; i < k; ++i) {
        if (!(x > 0.0))
            throw DomainError("iter_log: argument below the order-" + std::to_string(k) +
                              " threshold");
        x = std::log(x);
    }
    return x;
}

double iter_exp(int k, double x) {
    if (k < 0) throw DomainError("iter_exp: negative order");
    for (int i = 0; i < k; ++i) {
        x = std::exp(x);
        if (std::isinf(x)) throw Overflow("iter_exp: result beyond double range");
    }
    return x;
}

double iter_exp_log(int k, double x) {
    if (k < 1) throw DomainError("iter_exp_log: order must be >= 1");
    return iter_exp(k - 1, x);
}

}  // namespace oscillab
