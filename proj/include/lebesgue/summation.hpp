#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace lebesgue {

/// Neumaier (improved Kahan-Babuska) compensated accumulator.
class NeumaierSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Fixed-order pairwise sum; the result depends only on the input order.
[[nodiscard]] inline double pairwise_sum(std::span<const double> v) noexcept {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

} // namespace lebesgue
