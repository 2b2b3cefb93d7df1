#pragma once

#include "lebesgue/core.hpp"
#include "lebesgue/kernel.hpp"
#include "lebesgue/norms.hpp"

#include <cstddef>
#include <vector>

namespace lebesgue {

/// a0/2 + sum_{k=1}^{m} (a_k cos kt + b_k sin kt).
/// a[0] holds a0; b[0] is unused and kept at zero.
struct TrigPoly {
    std::vector<double> a{0.0};
    std::vector<double> b{0.0};

    [[nodiscard]] static TrigPoly zero(int degree);
    [[nodiscard]] int max_degree() const noexcept { return static_cast<int>(a.size()) - 1; }
    [[nodiscard]] double operator()(double t) const;
    /// Smooth function with bandwidth max_degree and an FFT sampler.
    [[nodiscard]] PiecewiseSmoothFunction as_function() const;
};

TrigPoly operator+(const TrigPoly& x, const TrigPoly& y);
TrigPoly operator-(const TrigPoly& x, const TrigPoly& y);
TrigPoly operator*(double s, const TrigPoly& x);

/// Values on t_j = 2 pi j / N, N a power of two >= 8.
struct SampledPeriodic {
    std::vector<double> values;
    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

namespace trig {

/// Discrete harmonic analysis up to degree m; exact for trigonometric
/// polynomials of degree <= m. Throws DomainError when m >= N/2.
[[nodiscard]] TrigPoly analyze(const SampledPeriodic& samples, int m);

/// Values on the N-point grid; requires N > 2 * max_degree.
[[nodiscard]] SampledPeriodic synthesize(const TrigPoly& poly, std::size_t N);

/// Compensated direct summation.
[[nodiscard]] double evaluate(const TrigPoly& poly, double t);

/// S_{n-1}: keeps the harmonics k <= n-1.
[[nodiscard]] TrigPoly partial_sum(const TrigPoly& poly, long long n);

enum class Direction { forward, inverse };

/// forward: a_k cos kt + b_k sin kt -> exp(-alpha k^r) (a_k cos(kt - beta pi/2) + b_k sin(kt - beta pi/2)).
/// inverse undoes it. The constant term is left unchanged.
[[nodiscard]] TrigPoly poisson_multiplier(const TrigPoly& poly, const KernelParams& params, Direction direction);

/// A_k = (1/pi) int delta cos kt, B_k = (1/pi) int delta sin kt for k = first..last.
struct HarmonicBlock {
    long long first = 0;
    std::vector<double> A;
    std::vector<double> B;

    [[nodiscard]] long long last() const noexcept { return first + static_cast<long long>(A.size()) - 1; }
};

/// Exact block of a trigonometric polynomial (zero beyond its degree).
[[nodiscard]] HarmonicBlock harmonic_block(const TrigPoly& delta, long long first, long long last);

/// Block of a piecewise-smooth function: FFT analysis on doubling grids when
/// there are no breakpoints, breakpoint-aware panel quadrature otherwise.
/// Refined until the largest coefficient change is below tol relative to
/// sqrt(2 pi) ||delta||_2 / pi, which bounds every coefficient.
[[nodiscard]] HarmonicBlock harmonic_block(const PiecewiseSmoothFunction& delta, long long first, long long last,
                                           double tol = 1e-11);

/// rho(x) = (1/pi) int delta(t) Q(x - t) dt for the scaled tail kernel Q,
/// assembled from the harmonics n..K of delta. Lower harmonics never enter,
/// so no cancellation against the partial Fourier sum occurs.
class TailDeviation {
public:
    TailDeviation(const ScaledTailKernel& kernel, HarmonicBlock block);

    /// Scaled value (multiply by exp(log_factor()) for the true deviation).
    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double log_factor() const noexcept { return log_factor_; }
    /// Values on the N-point uniform grid by one FFT.
    [[nodiscard]] std::vector<double> grid(std::size_t N) const;
    /// max |rho| by a grid scan followed by golden-section refinement.
    [[nodiscard]] norms::ArgMax sup(std::size_t N) const;
    /// max(8K, 4096) rounded up to a power of two.
    [[nodiscard]] std::size_t default_grid() const;

private:
    long long n_;
    long long K_;
    double phase_;
    double log_factor_;
    std::vector<std::complex<double>> d_;  // c_j (A_{n+j} - i B_{n+j})
};

[[nodiscard]] LogScaled deviation_via_tail(const TrigPoly& delta, const ScaledTailKernel& kernel, double x);
[[nodiscard]] LogScaled deviation_via_tail(const PiecewiseSmoothFunction& delta, const ScaledTailKernel& kernel,
                                           double x);

} // namespace trig
} // namespace lebesgue
