#include "lebesgue/norms.hpp"

#include "lebesgue/core.hpp"
#include "lebesgue/fft.hpp"
#include "lebesgue/summation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace lebesgue {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double t) {
    double r = std::fmod(t, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

template <int N>
struct GaussLegendre {
    std::array<double, N> x{};
    std::array<double, N> w{};

    GaussLegendre() {
        // Newton iteration on P_N from the Chebyshev-like initial guesses.
        for (int i = 0; i < (N + 1) / 2; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p1 = 1.0;
                double p2 = 0.0;
                for (int j = 0; j < N; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
                }
                pp = N * (z * p1 - p2) / (z * z - 1.0);
                const double z1 = z;
                z = z1 - p1 / pp;
                if (std::abs(z - z1) < 1e-16) break;
            }
            x[i] = -z;
            x[N - 1 - i] = z;
            w[i] = w[N - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
    }
};

const GaussLegendre<16>& gl16() {
    static const GaussLegendre<16> rule;
    return rule;
}

const GaussLegendre<32>& gl32() {
    static const GaussLegendre<32> rule;
    return rule;
}

constexpr int kSigmoidOrder = 3;

// psi(u) = u^m / (u^m + (1-u)^m) and its derivative.
void sigmoid(double u, double& psi, double& dpsi) {
    const double a = std::pow(u, kSigmoidOrder);
    const double b = std::pow(1.0 - u, kSigmoidOrder);
    const double d = a + b;
    psi = a / d;
    dpsi = kSigmoidOrder * std::pow(u, kSigmoidOrder - 1) * std::pow(1.0 - u, kSigmoidOrder - 1) / (d * d);
}

void add_plain_panel(norms::QuadratureRule& rule, double a, double b) {
    const auto& g = gl16();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (int i = 0; i < 16; ++i) {
        rule.nodes.push_back(mid + half * g.x[i]);
        rule.weights.push_back(half * g.w[i]);
    }
}

void add_clustered_panel(norms::QuadratureRule& rule, double a, double b) {
    const auto& g = gl32();
    const double width = b - a;
    for (int i = 0; i < 32; ++i) {
        const double u = 0.5 * (g.x[i] + 1.0);
        double psi = 0.0;
        double dpsi = 0.0;
        sigmoid(u, psi, dpsi);
        rule.nodes.push_back(a + width * psi);
        rule.weights.push_back(width * dpsi * 0.5 * g.w[i]);
    }
}

double base_panel_width(long long bandwidth) {
    const double bw = static_cast<double>(std::max<long long>(bandwidth, 1));
    return std::min(2.0 * kTwoPi / bw, std::numbers::pi / 2.0);
}

} // namespace

std::vector<double> PiecewiseSmoothFunction::sample(std::size_t N, double shift) const {
    if (sampler) return sampler(N, shift);
    std::vector<double> out(N);
    for (std::size_t j = 0; j < N; ++j) out[j] = evaluator(shift + kTwoPi * static_cast<double>(j) / static_cast<double>(N));
    return out;
}

std::vector<double> normalize_breakpoints(std::vector<double> points) {
    for (double& t : points) t = wrap(t);
    std::sort(points.begin(), points.end());
    std::vector<double> out;
    out.reserve(points.size());
    for (double t : points) {
        if (out.empty() || t - out.back() > 1e-14) out.push_back(t);
    }
    if (out.size() > 1 && out.front() + kTwoPi - out.back() <= 1e-14) out.pop_back();
    return out;
}

namespace norms {

QuadratureRule periodic_rule(std::span<const double> breakpoints, long long bandwidth, int level) {
    QuadratureRule rule;
    const double h = base_panel_width(bandwidth);
    const double scale = std::ldexp(1.0, level);
    if (breakpoints.empty()) {
        const auto panels = static_cast<std::size_t>(std::ceil(kTwoPi / h) * scale);
        rule.nodes.reserve(16 * panels);
        rule.weights.reserve(16 * panels);
        for (std::size_t p = 0; p < panels; ++p) {
            add_plain_panel(rule, kTwoPi * static_cast<double>(p) / static_cast<double>(panels),
                            kTwoPi * static_cast<double>(p + 1) / static_cast<double>(panels));
        }
        rule.uniform_panels = panels;
        return rule;
    }
    const std::size_t m = breakpoints.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double a = breakpoints[i];
        const double b = (i + 1 < m) ? breakpoints[i + 1] : breakpoints[0] + kTwoPi;
        const double w = b - a;
        if (!(w > 0.0)) continue;
        const auto pieces =
            static_cast<std::size_t>(std::max(2.0, std::ceil(w / h) + 1.0) * scale);
        for (std::size_t k = 0; k < pieces; ++k) {
            const double lo = a + w * static_cast<double>(k) / static_cast<double>(pieces);
            const double hi = (k + 1 == pieces) ? b : a + w * static_cast<double>(k + 1) / static_cast<double>(pieces);
            if (k == 0 || k + 1 == pieces) {
                add_clustered_panel(rule, lo, hi);
            } else {
                add_plain_panel(rule, lo, hi);
            }
        }
    }
    return rule;
}

std::vector<double> values_on_rule(const PiecewiseSmoothFunction& f, const QuadratureRule& rule) {
    std::vector<double> values(rule.nodes.size());
    if (rule.uniform_panels > 0 && f.sampler) {
        const std::size_t P = rule.uniform_panels;
        for (int i = 0; i < 16; ++i) {
            // Node i of every panel lies on the uniform grid shifted by node i of panel 0.
            const auto column = f.sampler(P, rule.nodes[static_cast<std::size_t>(i)]);
            for (std::size_t p = 0; p < P; ++p) values[16 * p + static_cast<std::size_t>(i)] = column[p];
        }
        return values;
    }
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) values[k] = f.evaluator(rule.nodes[k]);
    return values;
}

AdaptiveResult adaptive_integrate(std::span<const double> breakpoints, long long bandwidth,
                                  const std::function<std::vector<double>(const QuadratureRule&)>& integrals,
                                  const AdaptiveOptions& opts) {
    std::vector<double> previous = integrals(periodic_rule(breakpoints, bandwidth, 0));
    double last_change = 0.0;
    for (int level = 1; level <= opts.max_level; ++level) {
        std::vector<double> current = integrals(periodic_rule(breakpoints, bandwidth, level));
        double diff = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < current.size(); ++i) {
            diff = std::max(diff, std::abs(current[i] - previous[i]));
            scale = std::max(scale, std::abs(current[i]));
        }
        last_change = (scale > 0.0) ? diff / scale : diff;
        if (diff <= opts.tol * scale || scale == 0.0) return {std::move(current), level, last_change};
        previous = std::move(current);
    }
    throw ConvergenceError("adaptive_integrate: no agreement between successive refinements (last relative change " +
                           std::to_string(last_change) + ")");
}

double integrate(const PiecewiseSmoothFunction& f, const AdaptiveOptions& opts) {
    const auto bp = normalize_breakpoints(f.breakpoints);
    const auto result = adaptive_integrate(
        bp, f.bandwidth,
        [&f](const QuadratureRule& rule) {
            const auto v = values_on_rule(f, rule);
            std::vector<double> terms(v.size());
            for (std::size_t k = 0; k < v.size(); ++k) terms[k] = rule.weights[k] * v[k];
            return std::vector<double>{pairwise_sum(terms)};
        },
        opts);
    return result.values[0];
}

double lp_norm(const PiecewiseSmoothFunction& f, double q, double tol) {
    if (!(q >= 1.0)) throw DomainError("lp_norm: q must be >= 1");
    if (std::isinf(q)) {
        const auto N = static_cast<std::size_t>(std::max<long long>(8 * f.bandwidth, 4096));
        return uniform_norm_argmax(f, N).value;
    }
    std::vector<double> points = f.breakpoints;
    const bool even = q == std::floor(q) && std::fmod(q, 2.0) == 0.0;
    if (points.empty() && !even) {
        // |f|^q has kinks at the zeros of f.
        points = zeros_of(f, static_cast<std::size_t>(8 * std::max<long long>(f.bandwidth, 1)));
    }
    const auto bp = normalize_breakpoints(std::move(points));
    AdaptiveOptions opts;
    opts.tol = tol;
    const auto result = adaptive_integrate(
        bp, f.bandwidth,
        [&f, q](const QuadratureRule& rule) {
            const auto v = values_on_rule(f, rule);
            std::vector<double> terms(v.size());
            for (std::size_t k = 0; k < v.size(); ++k) {
                const double a = std::abs(v[k]);
                terms[k] = rule.weights[k] * (q == 1.0 ? a : (q == 2.0 ? a * a : std::pow(a, q)));
            }
            return std::vector<double>{pairwise_sum(terms)};
        },
        opts);
    return std::pow(result.values[0], 1.0 / q);
}

ArgMax golden_max(const std::function<double(double)>& g, double a, double b, double width) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double gc = g(c);
    double gd = g(d);
    while (b - a > width) {
        if (gc >= gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - invphi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + invphi * (b - a);
            gd = g(d);
        }
    }
    return (gc >= gd) ? ArgMax{gc, c} : ArgMax{gd, d};
}

ArgMax uniform_norm_argmax(const PiecewiseSmoothFunction& f, std::size_t resolution) {
    std::size_t N = std::max<std::size_t>(resolution, static_cast<std::size_t>(4 * std::max<long long>(f.bandwidth, 1)));
    N = fft::next_power_of_two(std::max<std::size_t>(N, 8));
    const auto v = f.sample(N);
    std::size_t best = 0;
    for (std::size_t j = 1; j < N; ++j) {
        if (std::abs(v[j]) > std::abs(v[best])) best = j;
    }
    const double h = kTwoPi / static_cast<double>(N);
    const double center = h * static_cast<double>(best);
    const auto refined =
        golden_max([&f](double t) { return std::abs(f.evaluator(t)); }, center - h, center + h, 1e-12);
    if (refined.value > std::abs(v[best])) return {refined.value, wrap(refined.location)};
    return {std::abs(v[best]), center};
}

std::vector<double> zeros_of(const PiecewiseSmoothFunction& f, std::size_t resolution) {
    std::size_t N = std::max<std::size_t>(resolution, static_cast<std::size_t>(4 * std::max<long long>(f.bandwidth, 1)));
    N = fft::next_power_of_two(std::max<std::size_t>(N, 8));
    const auto v = f.sample(N);
    const double h = kTwoPi / static_cast<double>(N);
    auto bisect = [&f](double a, double b, bool left_positive) {
        while (b - a > 1e-13) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            const double fm = f.evaluator(m);
            if (fm == 0.0) return m;
            if ((fm > 0.0) == left_positive) {
                a = m;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    };
    std::vector<double> zeros;
    for (std::size_t j = 0; j < N; ++j) {
        const double vp = v[(j + N - 1) % N];
        const double vj = v[j];
        const double vn = v[(j + 1) % N];
        const double tj = h * static_cast<double>(j);
        if (vj == 0.0) {
            zeros.push_back(tj);
            continue;
        }
        if (vn != 0.0 && (vj > 0.0) != (vn > 0.0)) {
            zeros.push_back(wrap(bisect(tj, tj + h, vj > 0.0)));
            continue;
        }
        // A close pair of zeros can hide between grid points; probe local
        // minima of |f| that show no sign change.
        const bool same_sign = vp != 0.0 && vn != 0.0 && (vp > 0.0) == (vj > 0.0) && (vn > 0.0) == (vj > 0.0);
        if (same_sign && std::abs(vj) < std::abs(vp) && std::abs(vj) <= std::abs(vn)) {
            const double s = vj > 0.0 ? -1.0 : 1.0;
            const auto dip = golden_max([&f, s](double t) { return s * f.evaluator(t); }, tj - h, tj + h, 1e-13);
            if (dip.value > 0.0) {
                zeros.push_back(wrap(bisect(tj - h, dip.location, vj > 0.0)));
                zeros.push_back(wrap(bisect(dip.location, tj + h, vj < 0.0)));
            }
        }
    }
    std::sort(zeros.begin(), zeros.end());
    return zeros;
}

} // namespace norms
} // namespace lebesgue
