#include "lebesgue/core.hpp"

#include <limits>

namespace lebesgue {

void KernelParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("kernel: alpha must be a positive finite number");
    if (!(r > 0.0 && r < 1.0)) throw DomainError("kernel: r must lie in (0, 1)");
    if (!std::isfinite(beta)) throw DomainError("kernel: beta must be finite");
}

double conjugate_exponent(double p) {
    if (!(p >= 1.0)) throw DomainError("conjugate_exponent: p must be >= 1");
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

} // namespace lebesgue
