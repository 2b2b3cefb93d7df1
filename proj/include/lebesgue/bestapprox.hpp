#pragma once

#include "lebesgue/norms.hpp"
#include "lebesgue/trig.hpp"

#include <optional>

namespace lebesgue {

struct ApproxOptions {
    double tol = 1e-8;  ///< certificate tolerance
    int max_iterations = 100;
    double quad_tol = 1e-11;
    /// Starting polynomial of the descent; the partial Fourier sum by default.
    std::optional<TrigPoly> initial;
    /// Run the descent at p = 2 instead of returning the partial Fourier sum.
    bool force_descent = false;
};

struct ApproxResult {
    double e_value = 0.0;
    TrigPoly minimizer;  ///< degree <= n-1
    double certificate_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// E_n(phi)_{L_p}: distance to trigonometric polynomials of degree <= n-1.
///
/// p = 2 truncates the Fourier series. For 1 < p < inf Newton steps on
/// the coefficients run first on a uniform grid (Hessian smoothed near the
/// zeros of phi - t), then with breakpoint-aware quadrature. p = 1 uses
/// Newton steps driven by the zeros of phi - t. Non-convergence is reported
/// through the converged flag.
[[nodiscard]] ApproxResult best_approx(const TrigPoly& phi, long long n, double p, const ApproxOptions& opts = {});
[[nodiscard]] ApproxResult best_approx(const PiecewiseSmoothFunction& phi, long long n, double p,
                                       const ApproxOptions& opts = {});

/// max over b in {1, cos kt, sin kt}, k < n, of |int b |delta|^{p-1} sign delta|,
/// divided by int |delta|^{p-1}. Zero certifies that 0 is a best approximant.
/// The zeros of delta are added to its breakpoints before integrating.
[[nodiscard]] double orthogonality_certificate(const PiecewiseSmoothFunction& delta, long long n, double p,
                                               double tol = 1e-11);
[[nodiscard]] double orthogonality_certificate(const TrigPoly& delta, long long n, double p);

} // namespace lebesgue
