#pragma once

#include "lebesgue/core.hpp"
#include "lebesgue/norms.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace lebesgue {

struct KernelOptions {
    double tol = 1e-18;                  ///< bound on the neglected scaled tail
    long long max_index = 100'000'000;   ///< cap on the truncation index K
    std::size_t grid_cap = std::size_t{1} << 22;  ///< largest uniform grid or panel count
};

/// The tail kernel P^(n) scaled by exp(alpha n^r):
///   Q(t) = sum_{j=0}^{K-n} c_j cos((n+j) t - beta pi/2),
///   c_j = exp(-alpha ((n+j)^r - n^r)).
class ScaledTailKernel {
public:
    ScaledTailKernel(KernelParams params, long long n, long long K, double tail_bound);

    [[nodiscard]] const KernelParams& params() const noexcept { return params_; }
    [[nodiscard]] long long n() const noexcept { return n_; }
    [[nodiscard]] long long K() const noexcept { return K_; }
    [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return c_; }
    [[nodiscard]] double tail_bound() const noexcept { return tail_bound_; }
    /// -alpha n^r.
    [[nodiscard]] double log_factor() const noexcept { return -params_.scale_exponent(static_cast<double>(n_)); }

    /// Q(t) by direct (Horner) summation.
    [[nodiscard]] double operator()(double t) const;
    /// sum_j c_j exp(i j t), so that Q(t) = Re[exp(i(n t - beta pi/2)) S(t)].
    [[nodiscard]] std::complex<double> envelope(double t) const;
    /// Q at shift + 2 pi j / N by one complex FFT of length N >= K - n + 1.
    [[nodiscard]] std::vector<double> sample(std::size_t N, double shift = 0.0) const;
    /// Smallest admissible grid: a power of two >= max(8K, 4096).
    [[nodiscard]] std::size_t default_grid() const;

    /// Q as a piecewise-smooth function (no breakpoints, bandwidth K).
    [[nodiscard]] PiecewiseSmoothFunction as_function() const;
    /// The same coefficients with beta replaced by -beta.
    [[nodiscard]] ScaledTailKernel reflected() const;

private:
    KernelParams params_;
    long long n_;
    long long K_;
    double tail_bound_;
    std::vector<double> c_;
};

/// Smallest K such that sum_{k>K} exp(-alpha (k^r - n^r)) is provably below tol.
/// tol >= 1 gives K = n. Throws ResolutionError beyond max_index.
[[nodiscard]] long long truncation_index(const KernelParams& params, long long n, double tol,
                                         long long max_index = KernelOptions{}.max_index);

/// Natural log of the bound on the scaled tail beyond K.
[[nodiscard]] double log_scaled_tail_bound(const KernelParams& params, long long n, long long K);

[[nodiscard]] ScaledTailKernel build_scaled_kernel(const KernelParams& params, long long n,
                                                   const KernelOptions& opts = {});

/// Kernel truncated at a caller-chosen K >= n; the tail bound is reported but not enforced.
[[nodiscard]] ScaledTailKernel build_scaled_kernel_at(const KernelParams& params, long long n, long long K);

enum class NormMethod { automatic, quadrature, parseval, uniform };

/// (1/pi) ||P^(n)||_q with log_factor = -alpha n^r.
/// automatic: q = 2 by Parseval, q = inf by uniform search, even integer q by
/// the exact trapezoidal rule, otherwise breakpoint-aware panel quadrature.
[[nodiscard]] LogScaled kernel_norm_numeric(const ScaledTailKernel& kernel, double q,
                                            NormMethod method = NormMethod::automatic,
                                            const KernelOptions& opts = {}, double tol = 1e-10);

/// Zeros of Q in [0, 2 pi), located on the default grid.
[[nodiscard]] std::vector<double> kernel_zeros(const ScaledTailKernel& kernel, const KernelOptions& opts = {});

struct AsymptoticNorm {
    LogScaled main;
    LogScaled band_unit;
};

/// Main term and remainder unit of the asymptotic formula for (1/pi)||P^(n)||_{p'}.
[[nodiscard]] AsymptoticNorm kernel_norm_asymptotic(const KernelParams& params, long long n, double p);

/// Right-hand side of the threshold condition: 1/14 for p = 1, (p-1)/(p (3 pi)^3) otherwise.
[[nodiscard]] double n0_threshold(double p);

/// Smallest n with n^{-r}/(alpha r) + alpha r p n^{-(1-r)} <= threshold.
[[nodiscard]] long long n0_for_threshold(double alpha, double r, double p, double threshold);

[[nodiscard]] long long n0(double alpha, double r, double p);

/// gamma = (numeric - main) / band_unit.
[[nodiscard]] double extract_gamma(const KernelParams& params, long long n, double p, const LogScaled& numeric_norm);

struct OneSidedDiagnostics {
    LogScaled sup_norm;   ///< ||P_{alpha,r,n}||_inf
    double m_n = 0.0;     ///< sup |P'| / |P|
    double m_n_bound = 0.0;
    double m_n_location = 0.0;
    double theta = 0.0;   ///< implied coefficient of the sup-norm expansion
    /// Implied delta in ||P^(n)||_inf = ||P_{alpha,r,n}||_inf (1 + delta M_n / n); needs the uniform norm of Q.
    double delta1 = 0.0;
};

/// Diagnostics of the one-sided kernel P_{alpha,r,n}(t) = sum_{k>=0} exp(-alpha (k+n)^r) exp(ikt).
[[nodiscard]] OneSidedDiagnostics one_sided_diagnostics(const KernelParams& params, long long n,
                                                        const KernelOptions& opts = {});

} // namespace lebesgue
