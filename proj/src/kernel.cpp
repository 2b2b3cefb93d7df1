#include "lebesgue/kernel.hpp"

#include "lebesgue/fft.hpp"
#include "lebesgue/specfun.hpp"
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

// (m * t) mod 2 pi with extended intermediate precision.
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

std::vector<double> tail_coefficients(const KernelParams& p, long long n, long long K) {
    const double nr = std::pow(static_cast<double>(n), p.r);
    const double dn = static_cast<double>(n);
    std::vector<double> c(static_cast<std::size_t>(K - n + 1));
    for (std::size_t j = 0; j < c.size(); ++j) {
        // (n+j)^r - n^r = n^r expm1(r log1p(j/n)), free of cancellation.
        const double gap = nr * std::expm1(p.r * std::log1p(static_cast<double>(j) / dn));
        c[j] = std::exp(-p.alpha * gap);
    }
    return c;
}

} // namespace

ScaledTailKernel::ScaledTailKernel(KernelParams params, long long n, long long K, double tail_bound)
    : params_(params), n_(n), K_(K), tail_bound_(tail_bound) {
    params_.validate();
    if (n < 1) throw DomainError("kernel: n must be >= 1");
    if (K < n) throw DomainError("kernel: truncation index K must be >= n");
    c_ = tail_coefficients(params_, n_, K_);
}

std::complex<double> ScaledTailKernel::envelope(double t) const {
    const std::complex<double> z = std::polar(1.0, reduce(t));
    std::complex<double> s = 0.0;
    for (std::size_t j = c_.size(); j-- > 0;) s = s * z + c_[j];
    return s;
}

double ScaledTailKernel::operator()(double t) const {
    const double tr = reduce(t);
    const std::complex<double> rot = std::polar(1.0, angle_mod(n_, tr) - params_.phase());
    return (rot * envelope(tr)).real();
}

std::vector<double> ScaledTailKernel::sample(std::size_t N, double shift) const {
    if (N == 0) throw DomainError("kernel: empty grid");
    // Fold harmonics modulo N; the fold is exact on the grid.
    std::vector<std::complex<double>> d(std::min<std::size_t>(N, c_.size()), 0.0);
    const double sr = reduce(shift);
    for (std::size_t j = 0; j < c_.size(); ++j) {
        d[j % N] += c_[j] * std::polar(1.0, angle_mod(static_cast<long long>(j), sr));
    }
    const auto s = fft::synthesize_complex(d, N);
    std::vector<double> out(N);
    const double base = angle_mod(n_, sr) - params_.phase();
    const auto nmod = static_cast<unsigned long long>(n_ % static_cast<long long>(N));
    for (std::size_t j = 0; j < N; ++j) {
        const auto idx = static_cast<double>((nmod * j) % N);
        const double ang = base + 2.0 * kPi * idx / static_cast<double>(N);
        out[j] = (std::polar(1.0, ang) * s[j]).real();
    }
    return out;
}

std::size_t ScaledTailKernel::default_grid() const {
    const long long want = std::max<long long>(8 * K_, 4096);
    return fft::next_power_of_two(static_cast<std::size_t>(want));
}

PiecewiseSmoothFunction ScaledTailKernel::as_function() const {
    PiecewiseSmoothFunction f;
    const auto width = c_.size() - 1;
    if (width >= 32 && fft::interpolation_grid(width) <= (std::size_t{1} << 22)) {
        // Interpolate the envelope S from an oversampled grid; Horner costs O(K) per point.
        const auto N = fft::interpolation_grid(width);
        std::vector<std::complex<double>> cc(c_.begin(), c_.end());
        const auto S = fft::synthesize_complex(cc, N);
        std::vector<double> re(N), im(N);
        for (std::size_t j = 0; j < N; ++j) {
            re[j] = S[j].real();
            im[j] = S[j].imag();
        }
        auto ire = std::make_shared<fft::PeriodicInterpolant>(std::move(re));
        auto iim = std::make_shared<fft::PeriodicInterpolant>(std::move(im));
        f.evaluator = [ire, iim, n = n_, phase = params_.phase()](double t) {
            const double tr = reduce(t);
            const std::complex<double> rot = std::polar(1.0, angle_mod(n, tr) - phase);
            return (rot * std::complex<double>((*ire)(tr), (*iim)(tr))).real();
        };
    } else {
        f.evaluator = [this](double t) { return (*this)(t); };
    }
    f.sampler = [this](std::size_t N, double shift) { return sample(N, shift); };
    f.bandwidth = K_;
    return f;
}

ScaledTailKernel ScaledTailKernel::reflected() const {
    ScaledTailKernel out = *this;
    out.params_ = params_.reflected();
    return out;
}

double log_scaled_tail_bound(const KernelParams& params, long long n, long long K) {
    // sum_{k>=K+1} exp(-alpha k^r) <= int_K^inf, then rescale by exp(alpha n^r).
    return specfun::log_exp_power_tail_bound(params.alpha, params.r, K + 1) +
           params.scale_exponent(static_cast<double>(n));
}

long long truncation_index(const KernelParams& params, long long n, double tol, long long max_index) {
    params.validate();
    if (n < 1) throw DomainError("truncation_index: n must be >= 1");
    if (!(tol > 0.0)) throw DomainError("truncation_index: tol must be positive");
    if (tol >= 1.0) return n;
    const double target = std::log(tol);
    auto ok = [&](long long K) { return log_scaled_tail_bound(params, n, K) < target; };
    if (ok(n)) return n;
    long long step = 1;
    while (!ok(n + step)) {
        if (n + step > max_index) {
            throw ResolutionError("truncation_index: K would exceed the cap of " + std::to_string(max_index));
        }
        step *= 2;
    }
    long long lo = n + step / 2;  // fails (or equals n, which failed)
    long long hi = n + step;      // succeeds
    if (step == 1) lo = n;
    while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        if (ok(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if (hi > max_index) throw ResolutionError("truncation_index: K would exceed the cap of " + std::to_string(max_index));
    return hi;
}

ScaledTailKernel build_scaled_kernel(const KernelParams& params, long long n, const KernelOptions& opts) {
    const long long K = truncation_index(params, n, opts.tol, opts.max_index);
    return {params, n, K, std::exp(log_scaled_tail_bound(params, n, K))};
}

ScaledTailKernel build_scaled_kernel_at(const KernelParams& params, long long n, long long K) {
    params.validate();
    if (K < n) throw DomainError("build_scaled_kernel_at: K must be >= n");
    return {params, n, K, std::exp(log_scaled_tail_bound(params, n, K))};
}

std::vector<double> kernel_zeros(const ScaledTailKernel& kernel, const KernelOptions& opts) {
    const std::size_t N = kernel.default_grid();
    if (N > opts.grid_cap) throw ResolutionError("kernel_zeros: grid of " + std::to_string(N) + " points exceeds the cap");
    return norms::zeros_of(kernel.as_function(), N);
}

LogScaled kernel_norm_numeric(const ScaledTailKernel& kernel, double q, NormMethod method, const KernelOptions& opts,
                              double tol) {
    if (!(q >= 1.0)) throw DomainError("kernel_norm_numeric: q must be >= 1");
    const double lf = kernel.log_factor();
    const bool even_integer = std::isfinite(q) && q == std::floor(q) && std::fmod(q, 2.0) == 0.0;
    if (method == NormMethod::automatic) {
        if (q == 2.0) {
            method = NormMethod::parseval;
        } else if (std::isinf(q)) {
            method = NormMethod::uniform;
        } else {
            method = NormMethod::quadrature;
        }
    }
    switch (method) {
    case NormMethod::parseval: {
        if (q != 2.0) throw DomainError("kernel_norm_numeric: the Parseval path requires q = 2");
        std::vector<double> sq(kernel.coefficients().size());
        for (std::size_t j = 0; j < sq.size(); ++j) sq[j] = kernel.coefficients()[j] * kernel.coefficients()[j];
        return {lf, std::sqrt(kPi * pairwise_sum(sq)) / kPi};
    }
    case NormMethod::uniform: {
        if (!std::isinf(q)) throw DomainError("kernel_norm_numeric: the uniform path requires q = inf");
        const std::size_t N = kernel.default_grid();
        if (N > opts.grid_cap) {
            throw ResolutionError("kernel_norm_numeric: uniform grid of " + std::to_string(N) + " points exceeds the cap");
        }
        return {lf, norms::uniform_norm_argmax(kernel.as_function(), N).value / kPi};
    }
    case NormMethod::quadrature:
    case NormMethod::automatic:
        break;
    }
    if (std::isinf(q)) throw DomainError("kernel_norm_numeric: use the uniform path for q = inf");
    const auto nodes = static_cast<std::size_t>(8 * kernel.K());
    if (nodes > opts.grid_cap) {
        throw ResolutionError("kernel_norm_numeric: quadrature needs " + std::to_string(nodes) +
                              " nodes, above the cap; use q = 2 or q = inf");
    }
    if (even_integer && method == NormMethod::quadrature && q != 2.0) {
        // |Q|^q is a trigonometric polynomial of degree q K: the trapezoidal rule is exact.
        const std::size_t N = fft::next_power_of_two(static_cast<std::size_t>(q * static_cast<double>(kernel.K())) + 1);
        if (N > opts.grid_cap) throw ResolutionError("kernel_norm_numeric: trapezoidal grid exceeds the cap");
        const auto v = kernel.sample(N);
        std::vector<double> terms(N);
        for (std::size_t j = 0; j < N; ++j) terms[j] = std::pow(std::abs(v[j]), q);
        const double integral = 2.0 * kPi * pairwise_sum(terms) / static_cast<double>(N);
        return {lf, std::pow(integral, 1.0 / q) / kPi};
    }
    PiecewiseSmoothFunction f = kernel.as_function();
    if (!even_integer) f.breakpoints = kernel_zeros(kernel, opts);
    return {lf, norms::lp_norm(f, q, tol) / kPi};
}

AsymptoticNorm kernel_norm_asymptotic(const KernelParams& params, long long n, double p) {
    params.validate();
    if (n < 1) throw DomainError("kernel_norm_asymptotic: n must be >= 1");
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("kernel_norm_asymptotic: p must lie in [1, inf)");
    const double ar = params.alpha * params.r;
    const double dn = static_cast<double>(n);
    const double r = params.r;
    const double lf = -params.scale_exponent(dn);
    if (p == 1.0) {
        const double lead = std::pow(dn, 1.0 - r);
        return {{lf, lead / (ar * kPi)}, {lf, lead * (std::pow(dn, -r) / (ar * ar) + std::pow(dn, r - 1.0))}};
    }
    const double pp = conjugate_exponent(p);
    const double F = specfun::gauss_2f1_unit({0.5, (3.0 - pp) / 2.0, 1.5});
    const double lead = std::pow(dn, (1.0 - r) / p);
    const double main = lead * specfun::cos_lp_norm(pp) / (std::pow(kPi, 1.0 + 1.0 / pp) * std::pow(ar, 1.0 / p)) *
                        std::pow(F, 1.0 / pp);
    const double band = lead * ((1.0 + std::pow(ar, (pp - 1.0) / p) / (pp - 1.0)) * std::pow(dn, -(1.0 - r) / p) +
                                std::pow(p, 1.0 / pp) * std::pow(ar, -1.0 - 1.0 / p) * std::pow(dn, -r));
    return {{lf, main}, {lf, band}};
}

double n0_threshold(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("n0: p must lie in [1, inf)");
    if (p == 1.0) return 1.0 / 14.0;
    return (p - 1.0) / p / std::pow(3.0 * kPi, 3.0);
}

long long n0_for_threshold(double alpha, double r, double p, double threshold) {
    KernelParams{alpha, r, 0.0}.validate();
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("n0: p must lie in [1, inf)");
    if (!(threshold > 0.0)) throw DomainError("n0: threshold must be positive");
    const double ar = alpha * r;
    // Relative slack so that exact equality (e.g. 2/sqrt(784) = 1/14) survives rounding.
    const double limit = threshold * (1.0 + 1e-12);
    auto ok = [&](long long n) {
        const double dn = static_cast<double>(n);
        return std::pow(dn, -r) / ar + ar * p * std::pow(dn, r - 1.0) <= limit;
    };
    constexpr long long kMax = std::numeric_limits<long long>::max();
    long long hi = 1;
    while (!ok(hi)) {
        if (hi > kMax / 2) throw OverflowError("n0: threshold index exceeds 2^63 - 1");
        hi *= 2;
    }
    if (hi == 1) return 1;
    long long lo = hi / 2;
    while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        if (ok(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

long long n0(double alpha, double r, double p) { return n0_for_threshold(alpha, r, p, n0_threshold(p)); }

double extract_gamma(const KernelParams& params, long long n, double p, const LogScaled& numeric_norm) {
    const auto asym = kernel_norm_asymptotic(params, n, p);
    if (!(asym.band_unit.mantissa > 0.0)) throw DomainError("extract_gamma: band unit must be positive");
    const LogScaled diff = numeric_norm - asym.main;
    return (diff / asym.band_unit).value();
}

OneSidedDiagnostics one_sided_diagnostics(const KernelParams& params, long long n, const KernelOptions& opts) {
    const auto kernel = build_scaled_kernel(params, n, opts);
    const auto& c = kernel.coefficients();
    const std::size_t B = c.size();
    const std::size_t N = fft::next_power_of_two(std::max<std::size_t>(8 * B, 4096));
    if (N > opts.grid_cap) throw ResolutionError("one_sided_diagnostics: grid exceeds the cap");

    std::vector<std::complex<double>> s_coef(B);
    std::vector<std::complex<double>> d_coef(B);
    for (std::size_t j = 0; j < B; ++j) {
        s_coef[j] = c[j];
        d_coef[j] = {0.0, static_cast<double>(j) * c[j]};
    }
    const auto s = fft::synthesize_complex(s_coef, N);
    const auto d = fft::synthesize_complex(d_coef, N);
    std::size_t best = 0;
    double best_ratio = -1.0;
    for (std::size_t j = 0; j < N; ++j) {
        const double ratio = std::abs(d[j]) / std::abs(s[j]);
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best = j;
        }
    }
    auto ratio_at = [&c](double t) {
        const std::complex<double> z = std::polar(1.0, t);
        std::complex<double> sv = 0.0;
        std::complex<double> dv = 0.0;
        for (std::size_t j = c.size(); j-- > 0;) {
            sv = sv * z + c[j];
            dv = dv * z + static_cast<double>(j) * c[j];
        }
        return std::abs(dv) / std::abs(sv);
    };
    const double h = 2.0 * kPi / static_cast<double>(N);
    const double t0 = h * static_cast<double>(best);
    const auto refined = norms::golden_max(ratio_at, t0 - h, t0 + h, 1e-12);

    OneSidedDiagnostics out;
    const double sup = pairwise_sum(c);  // |S(t)| <= sum c_j = S(0) for positive coefficients
    out.sup_norm = {kernel.log_factor(), sup};
    out.m_n = std::max(best_ratio, refined.value);
    out.m_n_location = refined.value > best_ratio ? reduce(refined.location) : t0;
    const double ar = params.alpha * params.r;
    const double dn = static_cast<double>(n);
    out.m_n_bound = ImpliedConstantBands::mn_bound_coeff * (std::pow(dn, 1.0 - params.r) / ar + ar * std::pow(dn, params.r));
    const double lead = std::pow(dn, 1.0 - params.r) / ar;
    out.theta = (sup / lead - 1.0) / ((1.0 - params.r) / (ar * std::pow(dn, params.r)) + ar / std::pow(dn, 1.0 - params.r));
    const std::size_t grid = kernel.default_grid();
    if (grid <= opts.grid_cap) {
        const double q_sup = norms::uniform_norm_argmax(kernel.as_function(), grid).value;
        out.delta1 = (q_sup / sup - 1.0) * dn / out.m_n;
    } else {
        out.delta1 = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

} // namespace lebesgue
