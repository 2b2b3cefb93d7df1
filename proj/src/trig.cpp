#include "lebesgue/trig.hpp"

#include "lebesgue/fft.hpp"
#include "lebesgue/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace lebesgue {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long double kTwoPiL = 6.283185307179586476925286766559005768L;

double angle_mod(long long m, double t) {
    long double a = std::fmod(static_cast<long double>(m) * static_cast<long double>(t), kTwoPiL);
    if (a < 0.0L) a += kTwoPiL;
    return static_cast<double>(a);
}

double reduce(double t) {
    double r = std::fmod(t, 2.0 * kPi);
    if (r < 0.0) r += 2.0 * kPi;
    return r;
}

void resize_poly(TrigPoly& p, std::size_t size) {
    p.a.resize(size, 0.0);
    p.b.resize(size, 0.0);
}

} // namespace

TrigPoly TrigPoly::zero(int degree) {
    if (degree < 0) throw DomainError("TrigPoly: negative degree");
    TrigPoly p;
    resize_poly(p, static_cast<std::size_t>(degree) + 1);
    return p;
}

double TrigPoly::operator()(double t) const { return trig::evaluate(*this, t); }

PiecewiseSmoothFunction TrigPoly::as_function() const {
    PiecewiseSmoothFunction f;
    const TrigPoly copy = *this;
    const auto degree = static_cast<std::size_t>(std::max(0, max_degree()));
    if (degree >= 32 && fft::interpolation_grid(degree) <= (std::size_t{1} << 22)) {
        // Direct summation costs O(degree) per point; interpolate an oversampled grid instead.
        const auto N = fft::interpolation_grid(degree);
        std::vector<std::complex<double>> c(degree + 1);
        c[0] = copy.a[0] / 2.0;
        for (std::size_t k = 1; k <= degree; ++k) c[k] = std::complex<double>(copy.a[k], -copy.b[k]);
        auto interp = std::make_shared<fft::PeriodicInterpolant>(fft::synthesize_real(c, N));
        f.evaluator = [interp](double t) { return (*interp)(t); };
    } else {
        f.evaluator = [copy](double t) { return trig::evaluate(copy, t); };
    }
    f.bandwidth = std::max(1, max_degree());
    f.sampler = [copy](std::size_t N, double shift) {
        const int m = copy.max_degree();
        std::vector<std::complex<double>> c(static_cast<std::size_t>(m) + 1);
        c[0] = copy.a[0] / 2.0;
        const double sr = reduce(shift);
        for (int k = 1; k <= m; ++k) {
            const auto ks = static_cast<std::size_t>(k);
            c[ks] = std::complex<double>(copy.a[ks], -copy.b[ks]) * std::polar(1.0, angle_mod(k, sr));
        }
        if (2 * c.size() <= N) return fft::synthesize_real(c, N);
        // Too coarse for the degree: evaluate directly.
        std::vector<double> out(N);
        for (std::size_t j = 0; j < N; ++j) {
            out[j] = trig::evaluate(copy, shift + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(N));
        }
        return out;
    };
    return f;
}

TrigPoly operator+(const TrigPoly& x, const TrigPoly& y) {
    TrigPoly out = x.a.size() >= y.a.size() ? x : y;
    const TrigPoly& other = x.a.size() >= y.a.size() ? y : x;
    for (std::size_t k = 0; k < other.a.size(); ++k) {
        out.a[k] += other.a[k];
        out.b[k] += other.b[k];
    }
    return out;
}

TrigPoly operator*(double s, const TrigPoly& x) {
    TrigPoly out = x;
    for (std::size_t k = 0; k < out.a.size(); ++k) {
        out.a[k] *= s;
        out.b[k] *= s;
    }
    return out;
}

TrigPoly operator-(const TrigPoly& x, const TrigPoly& y) { return x + (-1.0) * y; }

namespace trig {

TrigPoly analyze(const SampledPeriodic& samples, int m) {
    const std::size_t N = samples.size();
    if (N < 8 || !fft::is_power_of_two(N)) throw DomainError("analyze: sample count must be a power of two >= 8");
    if (m < 0 || 2 * static_cast<std::size_t>(m) >= N) {
        throw DomainError("analyze: degree " + std::to_string(m) + " aliases on " + std::to_string(N) + " samples");
    }
    const auto X = fft::analyze_real(samples.values);
    TrigPoly p = TrigPoly::zero(m);
    const double scale = 2.0 / static_cast<double>(N);
    p.a[0] = scale * X[0].real();
    for (std::size_t k = 1; k <= static_cast<std::size_t>(m); ++k) {
        p.a[k] = scale * X[k].real();
        p.b[k] = -scale * X[k].imag();
    }
    return p;
}

SampledPeriodic synthesize(const TrigPoly& poly, std::size_t N) {
    if (N < 8 || !fft::is_power_of_two(N)) throw DomainError("synthesize: N must be a power of two >= 8");
    if (2 * static_cast<std::size_t>(poly.max_degree()) >= N) throw DomainError("synthesize: N must exceed twice the degree");
    return {poly.as_function().sample(N, 0.0)};
}

double evaluate(const TrigPoly& poly, double t) {
    const double tr = reduce(t);
    NeumaierSum s;
    s.add(poly.a[0] / 2.0);
    const std::complex<double> step = std::polar(1.0, tr);
    std::complex<double> z = step;
    for (std::size_t k = 1; k < poly.a.size(); ++k) {
        // Phase by recurrence, re-anchored every 32 steps.
        if (k % 32 == 0) z = std::polar(1.0, angle_mod(static_cast<long long>(k), tr));
        if (poly.a[k] != 0.0) s.add(poly.a[k] * z.real());
        if (poly.b[k] != 0.0) s.add(poly.b[k] * z.imag());
        z *= step;
    }
    return s.value();
}

TrigPoly partial_sum(const TrigPoly& poly, long long n) {
    if (n < 1) throw DomainError("partial_sum: n must be >= 1");
    TrigPoly out = poly;
    if (static_cast<long long>(out.a.size()) > n) resize_poly(out, static_cast<std::size_t>(n));
    return out;
}

TrigPoly poisson_multiplier(const TrigPoly& poly, const KernelParams& params, Direction direction) {
    params.validate();
    const double c = std::cos(params.phase());
    const double s = std::sin(params.phase());
    TrigPoly out = poly;
    for (std::size_t k = 1; k < poly.a.size(); ++k) {
        const double e = params.scale_exponent(static_cast<double>(k));
        const double a = poly.a[k];
        const double b = poly.b[k];
        if (direction == Direction::forward) {
            const double m = std::exp(-e);
            out.a[k] = m * (a * c - b * s);
            out.b[k] = m * (a * s + b * c);
        } else {
            if (e > std::log(std::numeric_limits<double>::max()) - 1.0) {
                throw OverflowError("poisson_multiplier: exp(alpha k^r) overflows at k = " + std::to_string(k));
            }
            const double m = std::exp(e);
            out.a[k] = m * (a * c + b * s);
            out.b[k] = m * (b * c - a * s);
        }
    }
    return out;
}

HarmonicBlock harmonic_block(const TrigPoly& delta, long long first, long long last) {
    if (first < 0 || last < first) throw DomainError("harmonic_block: empty range");
    HarmonicBlock h;
    h.first = first;
    h.A.assign(static_cast<std::size_t>(last - first + 1), 0.0);
    h.B.assign(h.A.size(), 0.0);
    for (long long k = first; k <= std::min<long long>(last, delta.max_degree()); ++k) {
        const auto i = static_cast<std::size_t>(k - first);
        h.A[i] = delta.a[static_cast<std::size_t>(k)];
        h.B[i] = delta.b[static_cast<std::size_t>(k)];
    }
    return h;
}

HarmonicBlock harmonic_block(const PiecewiseSmoothFunction& delta, long long first, long long last, double tol) {
    if (first < 0 || last < first) throw DomainError("harmonic_block: empty range");
    const auto L = static_cast<std::size_t>(last - first + 1);
    const auto bp = normalize_breakpoints(delta.breakpoints);
    if (bp.empty()) {
        // Smooth periodic input: the trapezoidal rule converges geometrically,
        // so use FFT analysis on doubling grids.
        std::size_t N = fft::next_power_of_two(
            static_cast<std::size_t>(4 * std::max(last + 1, std::max<long long>(delta.bandwidth, 1))));
        std::vector<double> prev;
        for (int level = 0; level <= 8; ++level, N *= 2) {
            const auto X = fft::analyze_real(delta.sample(N, 0.0));
            std::vector<double> cur(2 * L);
            const double s = 2.0 / static_cast<double>(N);
            double scale = 0.0;
            for (std::size_t i = 0; i < L; ++i) {
                const auto k = static_cast<std::size_t>(first) + i;
                cur[i] = s * X[k].real();
                cur[L + i] = -s * X[k].imag();
                scale = std::max({scale, std::abs(cur[i]), std::abs(cur[L + i])});
            }
            double energy = 0.0;
            for (std::size_t k = 0; k < X.size(); ++k) energy += std::norm(X[k]);
            scale = std::max(scale, s * std::sqrt(energy));
            if (!prev.empty()) {
                double diff = 0.0;
                for (std::size_t i = 0; i < cur.size(); ++i) diff = std::max(diff, std::abs(cur[i] - prev[i]));
                if (diff <= tol * scale) {
                    HarmonicBlock h;
                    h.first = first;
                    h.A.assign(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(L));
                    h.B.assign(cur.begin() + static_cast<std::ptrdiff_t>(L), cur.end());
                    return h;
                }
            }
            prev = std::move(cur);
        }
        throw ConvergenceError("harmonic_block: FFT coefficients did not settle");
    }
    norms::AdaptiveOptions opts;
    opts.tol = tol;
    const long long bandwidth = std::max(delta.bandwidth, last);
    const auto result = norms::adaptive_integrate(
        bp, bandwidth,
        [&](const norms::QuadratureRule& rule) {
            const auto v = norms::values_on_rule(delta, rule);
            // The last entry, sqrt(2 pi int delta^2) / pi, bounds every coefficient,
            // so the relative test never stalls on coefficients that vanish.
            std::vector<double> acc(2 * L + 1, 0.0);
            for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
                const double wv = rule.weights[m] * v[m] / kPi;
                acc[2 * L] += rule.weights[m] * v[m] * v[m];
                if (wv == 0.0) continue;
                const double t = reduce(rule.nodes[m]);
                std::complex<double> z = std::polar(1.0, angle_mod(first, t));
                const std::complex<double> step = std::polar(1.0, t);
                for (std::size_t i = 0; i < L; ++i) {
                    // Re-anchor the recurrence every 256 steps.
                    if (i % 256 == 0 && i > 0) z = std::polar(1.0, angle_mod(first + static_cast<long long>(i), t));
                    acc[i] += wv * z.real();
                    acc[L + i] += wv * z.imag();
                    z *= step;
                }
            }
            acc[2 * L] = std::sqrt(2.0 * kPi * acc[2 * L]) / kPi;
            return acc;
        },
        opts);
    HarmonicBlock h;
    h.first = first;
    h.A.assign(result.values.begin(), result.values.begin() + static_cast<std::ptrdiff_t>(L));
    h.B.assign(result.values.begin() + static_cast<std::ptrdiff_t>(L), result.values.begin() + static_cast<std::ptrdiff_t>(2 * L));
    return h;
}

TailDeviation::TailDeviation(const ScaledTailKernel& kernel, HarmonicBlock block)
    : n_(kernel.n()), K_(kernel.K()), phase_(kernel.params().phase()), log_factor_(kernel.log_factor()) {
    if (block.first > n_) throw DomainError("TailDeviation: harmonic block must start at or below n");
    const auto& c = kernel.coefficients();
    d_.assign(c.size(), 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
        const long long k = n_ + static_cast<long long>(j);
        if (k > block.last()) break;
        const auto i = static_cast<std::size_t>(k - block.first);
        d_[j] = c[j] * std::complex<double>(block.A[i], -block.B[i]);
    }
}

double TailDeviation::operator()(double x) const {
    const double xr = reduce(x);
    const std::complex<double> z = std::polar(1.0, xr);
    std::complex<double> s = 0.0;
    for (std::size_t j = d_.size(); j-- > 0;) s = s * z + d_[j];
    return (std::polar(1.0, angle_mod(n_, xr) - phase_) * s).real();
}

std::vector<double> TailDeviation::grid(std::size_t N) const {
    if (N == 0) throw DomainError("TailDeviation: empty grid");
    std::vector<std::complex<double>> folded(std::min(N, d_.size()), 0.0);
    for (std::size_t j = 0; j < d_.size(); ++j) folded[j % N] += d_[j];
    const auto s = fft::synthesize_complex(folded, N);
    std::vector<double> out(N);
    const auto nmod = static_cast<unsigned long long>(n_ % static_cast<long long>(N));
    for (std::size_t j = 0; j < N; ++j) {
        const auto idx = static_cast<double>((nmod * j) % N);
        out[j] = (std::polar(1.0, 2.0 * kPi * idx / static_cast<double>(N) - phase_) * s[j]).real();
    }
    return out;
}

std::size_t TailDeviation::default_grid() const {
    return fft::next_power_of_two(static_cast<std::size_t>(std::max<long long>(8 * K_, 4096)));
}

norms::ArgMax TailDeviation::sup(std::size_t N) const {
    N = fft::next_power_of_two(std::max<std::size_t>(N, 8));
    const auto v = grid(N);
    std::size_t best = 0;
    for (std::size_t j = 1; j < N; ++j) {
        if (std::abs(v[j]) > std::abs(v[best])) best = j;
    }
    const double h = 2.0 * kPi / static_cast<double>(N);
    const double center = h * static_cast<double>(best);
    const auto refined = norms::golden_max([this](double x) { return std::abs((*this)(x)); }, center - h, center + h);
    if (refined.value > std::abs(v[best])) return {refined.value, reduce(refined.location)};
    return {std::abs(v[best]), center};
}

LogScaled deviation_via_tail(const TrigPoly& delta, const ScaledTailKernel& kernel, double x) {
    const TailDeviation rho(kernel, harmonic_block(delta, kernel.n(), kernel.K()));
    return {rho.log_factor(), rho(x)};
}

LogScaled deviation_via_tail(const PiecewiseSmoothFunction& delta, const ScaledTailKernel& kernel, double x) {
    const TailDeviation rho(kernel, harmonic_block(delta, kernel.n(), kernel.K()));
    return {rho.log_factor(), rho(x)};
}

} // namespace trig
} // namespace lebesgue
