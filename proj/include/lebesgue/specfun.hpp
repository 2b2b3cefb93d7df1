#pragma once

namespace lebesgue::specfun {

/// ln Gamma(x) for x > 0 (Lanczos approximation, relative error ~1e-15).
[[nodiscard]] double log_gamma(double x);

/// Gamma(x) as (sign, ln|Gamma(x)|) for any x that is not a non-positive integer.
struct SignedLogGamma {
    double log_abs;
    int sign;
};
[[nodiscard]] SignedLogGamma signed_log_gamma(double x);

/// Arguments of the Gauss hypergeometric function F(a, b; c; z).
struct GaussArgs {
    double a;
    double b;
    double c;
};

/// The two evaluation routes of F(a, b; c; 1).
struct Gauss2F1Routes {
    double gamma_formula;  ///< Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b))
    double series;         ///< direct summation of the defining series
    long terms;            ///< number of series terms summed
    bool extrapolated;     ///< true if the series tail was extrapolated
};

/// Evaluates both routes without checking agreement.
[[nodiscard]] Gauss2F1Routes gauss_2f1_unit_routes(const GaussArgs& args);

/// F(a, b; c; 1). Requires c - a - b > 0; throws ConvergenceError if the
/// Gauss summation formula and the direct series disagree beyond 1e-10 relative.
[[nodiscard]] double gauss_2f1_unit(const GaussArgs& args);

/// (int_0^{2pi} |cos t|^q dt)^{1/q} for q >= 1.
[[nodiscard]] double cos_lp_norm(double q);

/// ln Gamma(a, x), the upper incomplete gamma function, for a > 0, x >= 0.
[[nodiscard]] double log_upper_incomplete_gamma(double a, double x);

/// Upper bound on sum_{k>=K} exp(-alpha k^r), as the integral of the summand
/// from K-1 to infinity. Requires alpha > 0, r in (0, 1], K >= 2.
[[nodiscard]] double exp_power_tail_bound(double alpha, double r, long long K);

/// Natural log of exp_power_tail_bound; stays finite when the bound underflows.
[[nodiscard]] double log_exp_power_tail_bound(double alpha, double r, long long K);

} // namespace lebesgue::specfun
