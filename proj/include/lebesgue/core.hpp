#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lebesgue {

// Error taxonomy. The CLI maps DomainError to a usage-style failure and the
// remaining numeric errors to exit code 3.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a grid or truncation index would exceed its configured cap.
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OverflowError : std::overflow_error {
    using std::overflow_error::overflow_error;
};

/// The triple (alpha, r, beta) of a generalized Poisson kernel
///   P(t) = sum_{k>=1} exp(-alpha k^r) cos(k t - beta pi / 2).
struct KernelParams {
    double alpha = 1.0;
    double r = 0.5;
    double beta = 0.0;

    /// Throws DomainError unless alpha > 0 and 0 < r < 1.
    void validate() const;

    /// Phase shift beta*pi/2.
    [[nodiscard]] double phase() const noexcept { return beta * std::numbers::pi / 2.0; }

    /// alpha * n^r, the exponent of the kernel scale factor exp(-alpha n^r).
    [[nodiscard]] double scale_exponent(double n) const noexcept { return alpha * std::pow(n, r); }

    [[nodiscard]] KernelParams reflected() const noexcept { return {alpha, r, -beta}; }
};

/// A real number stored as mantissa * exp(log_factor).
///
/// Kernel-magnitude quantities carry log_factor = -alpha n^r so that values
/// far below the binary64 range (exp(-10^4) at n ~ 2.5e7) stay representable.
struct LogScaled {
    double log_factor = 0.0;
    double mantissa = 0.0;

    [[nodiscard]] static LogScaled from_value(double v) noexcept { return {0.0, v}; }

    /// The represented value; may underflow to zero.
    [[nodiscard]] double value() const noexcept { return mantissa * std::exp(log_factor); }

    /// ln|value|; -inf for a zero mantissa.
    [[nodiscard]] double log_abs() const noexcept { return std::log(std::abs(mantissa)) + log_factor; }

    /// Mantissa re-expressed against another log factor.
    [[nodiscard]] double mantissa_at(double target_log_factor) const noexcept {
        if (mantissa == 0.0) return 0.0;
        return mantissa * std::exp(log_factor - target_log_factor);
    }

    [[nodiscard]] LogScaled rescaled(double target_log_factor) const noexcept {
        return {target_log_factor, mantissa_at(target_log_factor)};
    }

    LogScaled& operator*=(double s) noexcept {
        mantissa *= s;
        return *this;
    }
    friend LogScaled operator*(LogScaled a, double s) noexcept { return a *= s; }
    friend LogScaled operator*(double s, LogScaled a) noexcept { return a *= s; }
    friend LogScaled operator*(const LogScaled& a, const LogScaled& b) noexcept {
        return {a.log_factor + b.log_factor, a.mantissa * b.mantissa};
    }
    friend LogScaled operator/(const LogScaled& a, const LogScaled& b) noexcept {
        return {a.log_factor - b.log_factor, a.mantissa / b.mantissa};
    }

    /// Sum aligned to the larger of the two log factors.
    friend LogScaled operator+(const LogScaled& a, const LogScaled& b) noexcept {
        if (a.mantissa == 0.0) return b;
        if (b.mantissa == 0.0) return a;
        const double lf = std::max(a.log_factor, b.log_factor);
        return {lf, a.mantissa_at(lf) + b.mantissa_at(lf)};
    }
    friend LogScaled operator-(const LogScaled& a, const LogScaled& b) noexcept {
        return a + LogScaled{b.log_factor, -b.mantissa};
    }

    /// Signed comparison after aligning log factors.
    friend bool operator<(const LogScaled& a, const LogScaled& b) noexcept {
        return (a - b).mantissa < 0.0;
    }
    friend bool operator<=(const LogScaled& a, const LogScaled& b) noexcept {
        return (a - b).mantissa <= 0.0;
    }
};

/// Constants bounding the implied quantities of the asymptotic norm formulas.
struct ImpliedConstantBands {
    static constexpr double pi = std::numbers::pi;
    /// |gamma_{n,p}| <= (14 pi)^2.
    static constexpr double gamma_band = (14.0 * pi) * (14.0 * pi);
    /// |theta_{alpha,r,n}| <= 14/13 in the one-sided sup-norm formula.
    static constexpr double theta_band = 14.0 / 13.0;
    /// |delta_n^(1)| <= 5 sqrt(2) pi.
    static constexpr double delta1_band = 5.0 * std::numbers::sqrt2 * pi;
    /// |Theta^(1)| < 2 in the truncated-integral expansion.
    static constexpr double Theta1_band = 2.0;
    /// M_n <= mn_bound_coeff * (n^{1-r}/(alpha r) + alpha r n^r).
    static constexpr double mn_bound_coeff = 784.0 * pi * pi / 117.0;
    /// Refined band for gamma_{n,1}: (14/(13 pi)) (1 + 3920 sqrt(2) pi^3 / 117).
    static constexpr double refined_gamma1_band =
        14.0 / (13.0 * pi) * (1.0 + 3920.0 * std::numbers::sqrt2 * pi * pi * pi / 117.0);
};

/// Conjugate exponent p' = p/(p-1); +inf for p = 1.
[[nodiscard]] double conjugate_exponent(double p);

} // namespace lebesgue
