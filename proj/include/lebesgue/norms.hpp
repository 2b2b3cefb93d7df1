#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lebesgue {

/// A 2 pi-periodic function that is smooth between the listed breakpoints.
struct PiecewiseSmoothFunction {
    std::function<double(double)> evaluator;
    /// Sorted points of [0, 2 pi) where the function or a derivative is singular.
    std::vector<double> breakpoints;
    /// Highest effective oscillation frequency between breakpoints.
    long long bandwidth = 1;
    /// Optional fast path returning the values at shift + 2 pi j / N, j = 0..N-1.
    std::function<std::vector<double>(std::size_t N, double shift)> sampler;

    double operator()(double t) const { return evaluator(t); }

    /// Values on the shifted uniform grid, through the sampler when present.
    [[nodiscard]] std::vector<double> sample(std::size_t N, double shift = 0.0) const;
};

/// Sorts, wraps into [0, 2 pi) and merges points closer than 1e-14.
[[nodiscard]] std::vector<double> normalize_breakpoints(std::vector<double> points);

namespace norms {

/// Composite Gauss-Legendre rule over one period.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    /// Nonzero when the rule consists of this many equal 16-point panels
    /// starting at 0, stored panel by panel. Such rules can be evaluated
    /// through PiecewiseSmoothFunction::sampler.
    std::size_t uniform_panels = 0;
};

/// Panels never straddle a breakpoint. Panels have width at most
/// 4 pi / bandwidth / 2^level, i.e. at least 8 nodes per period of the
/// highest harmonic at level 0. Panels touching a breakpoint use a 32-point
/// rule after a sigmoidal change of variables that clusters nodes at both
/// ends, which absorbs endpoint behaviour like |t - a|^s, s > -1.
[[nodiscard]] QuadratureRule periodic_rule(std::span<const double> breakpoints, long long bandwidth, int level);

/// f evaluated at every node of the rule.
[[nodiscard]] std::vector<double> values_on_rule(const PiecewiseSmoothFunction& f, const QuadratureRule& rule);

struct AdaptiveOptions {
    double tol = 1e-10;  ///< relative change between successive levels
    int max_level = 8;
};

struct AdaptiveResult {
    std::vector<double> values;
    int level = 0;
    double change = 0.0;  ///< relative change at the accepted level
};

/// Evaluates a vector of integrals on successively halved panels until two
/// successive levels agree to tol relative to the largest component.
/// Throws ConvergenceError after max_level.
[[nodiscard]] AdaptiveResult adaptive_integrate(
    std::span<const double> breakpoints, long long bandwidth,
    const std::function<std::vector<double>(const QuadratureRule&)>& integrals, const AdaptiveOptions& opts = {});

/// Integral of f over one period.
[[nodiscard]] double integrate(const PiecewiseSmoothFunction& f, const AdaptiveOptions& opts = {});

/// (int_0^{2 pi} |f|^q dt)^{1/q}; q = inf gives the uniform norm. Without declared
/// breakpoints and for q not an even integer, the zeros of f are used as breakpoints.
[[nodiscard]] double lp_norm(const PiecewiseSmoothFunction& f, double q, double tol = 1e-10);

struct ArgMax {
    double value = 0.0;     ///< max |f|
    double location = 0.0;  ///< in [0, 2 pi)
};

/// Scan of |f| on a uniform grid followed by golden-section refinement
/// around the best grid point. The resolution is raised to at least
/// 4 * bandwidth and to a power of two.
[[nodiscard]] ArgMax uniform_norm_argmax(const PiecewiseSmoothFunction& f, std::size_t resolution);

/// Sign changes on a uniform grid, refined by bisection to 1e-13. Local
/// minima of |f| on the grid are probed for a hidden pair of zeros.
/// Tangential zeros without a sign change are not reported.
[[nodiscard]] std::vector<double> zeros_of(const PiecewiseSmoothFunction& f, std::size_t resolution);

/// Golden-section maximisation of g on [a, b] down to the given width.
[[nodiscard]] ArgMax golden_max(const std::function<double(double)>& g, double a, double b, double width = 1e-12);

} // namespace norms
} // namespace lebesgue
