#include "lebesgue/extremal.hpp"

#include "lebesgue/bestapprox.hpp"
#include "lebesgue/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace lebesgue {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

double wrap(double t) {
    double r = std::fmod(t, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

double signed_pow(double v, double e) {
    if (e == 1.0) return v;
    return std::copysign(std::pow(std::abs(v), e), v);
}

void check_common(const KernelParams& params, long long n, double target_e) {
    params.validate();
    if (n < 1) throw DomainError("extremal: n must be >= 1");
    if (!(target_e > 0.0) || !std::isfinite(target_e)) throw DomainError("extremal: target_e must be positive");
}

// int_a^b Q(t) dt for Q(t) = sum_j c_j cos((n+j) t - phase).
double kernel_integral(const ScaledTailKernel& q, double a, double b) {
    const auto& c = q.coefficients();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double phase = q.params().phase();
    NeumaierSum s;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double m = static_cast<double>(q.n() + static_cast<long long>(j));
        s.add(c[j] * 2.0 * std::sin(m * half) * std::cos(m * mid - phase) / m);
    }
    return s.value();
}

trig::HarmonicBlock piecewise_constant_block(const std::vector<ConstantPiece>& pieces, long long first, long long last) {
    trig::HarmonicBlock h;
    h.first = first;
    const auto L = static_cast<std::size_t>(last - first + 1);
    std::vector<NeumaierSum> A(L), B(L);
    for (const auto& pc : pieces) {
        const double half = 0.5 * (pc.b - pc.a);
        const double mid = 0.5 * (pc.a + pc.b);
        for (std::size_t i = 0; i < L; ++i) {
            const auto k = first + static_cast<long long>(i);
            if (k == 0) {
                A[i].add(pc.value * (pc.b - pc.a));
                continue;
            }
            const double kd = static_cast<double>(k);
            const double f = pc.value * 2.0 * std::sin(kd * half) / kd;
            A[i].add(f * std::cos(kd * mid));
            B[i].add(f * std::sin(kd * mid));
        }
    }
    h.A.resize(L);
    h.B.resize(L);
    for (std::size_t i = 0; i < L; ++i) {
        h.A[i] = A[i].value() / kPi;
        h.B[i] = B[i].value() / kPi;
    }
    return h;
}

trig::HarmonicBlock phi_block(const ExtremalPhi& phi, const ScaledTailKernel& kernel, double tol) {
    const long long first = kernel.n();
    const long long last = kernel.K();
    if (phi.kind == PhiKind::two_level) return piecewise_constant_block(phi.pieces, first, last);
    if (conjugate_exponent(phi.p) == 2.0) {
        // Phi is a multiple of the kernel for -beta; read off its coefficients.
        const double s = phi.target_e / phi.kernel_norm;
        const double cb = std::cos(phi.params.phase());
        const double sb = std::sin(phi.params.phase());
        trig::HarmonicBlock h;
        h.first = first;
        for (double c : kernel.coefficients()) {
            h.A.push_back(s * c * cb);
            h.B.push_back(-s * c * sb);
        }
        return h;
    }
    return trig::harmonic_block(phi.function, first, last, tol);
}

} // namespace

ExtremalPhi build_phi(const KernelParams& params, long long n, double p, double target_e, const ExtremalOptions& opts) {
    check_common(params, n, target_e);
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("build_phi: p must lie in (1, inf)");
    const double pp = conjugate_exponent(p);
    const auto q = std::make_shared<const ScaledTailKernel>(build_scaled_kernel(params.reflected(), n, opts.kernel));

    ExtremalPhi phi;
    phi.kind = PhiKind::power;
    phi.params = params;
    phi.n = n;
    phi.p = p;
    phi.target_e = target_e;
    phi.K = q->K();
    phi.kernel_norm = kernel_norm_numeric(*q, pp, NormMethod::automatic, opts.kernel, opts.quad_tol).mantissa * kPi;
    phi.breakpoints = kernel_zeros(*q, opts.kernel);

    const double scale = target_e * std::pow(phi.kernel_norm, 1.0 - pp);
    const double e = pp - 1.0;
    const auto qf = q->as_function();
    phi.function.evaluator = [q, ev = qf.evaluator, scale, e](double t) { return scale * signed_pow(ev(t), e); };
    phi.function.sampler = [q, scale, e](std::size_t N, double shift) {
        auto v = q->sample(N, shift);
        for (double& x : v) x = scale * signed_pow(x, e);
        return v;
    };
    phi.function.breakpoints = phi.breakpoints;
    phi.function.bandwidth = q->K() * std::max<long long>(1, static_cast<long long>(std::ceil(e)));

    phi.norm = norms::lp_norm(phi.function, p, opts.quad_tol);
    if (std::abs(phi.norm - target_e) > opts.check_tol * target_e) {
        throw ConvergenceError("build_phi: ||Phi||_p differs from the target beyond tolerance");
    }
    phi.certificate = orthogonality_certificate(phi.function, n, p, opts.quad_tol);
    if (phi.certificate > opts.check_tol) throw ConvergenceError("build_phi: orthogonality certificate failed");
    return phi;
}

LogScaled choose_eps(const KernelParams& params, long long n, const KernelOptions& opts) {
    params.validate();
    if (n < 1) throw DomainError("choose_eps: n must be >= 1");
    const auto kernel = build_scaled_kernel(params, n, opts);
    const double sup = kPi * kernel_norm_numeric(kernel, std::numeric_limits<double>::infinity(),
                                                 NormMethod::uniform, opts).value();
    const double nd = static_cast<double>(n);
    const double ar = params.alpha * params.r;
    const double bracket = std::pow(nd, 1.0 - params.r) * (1.0 / (ar * std::pow(nd, params.r)) + ar / std::pow(nd, 1.0 - params.r));
    const LogScaled numerator{-params.scale_exponent(nd),
                              (ImpliedConstantBands::gamma_band - ImpliedConstantBands::refined_gamma1_band) * bracket};
    const double denominator = (2.0 + 1.0 / kPi) * sup + 1.0 / kPi;
    const LogScaled bound = numerator * (1.0 / denominator);
    const LogScaled cap = LogScaled::from_value(1.0 / kTwoPi);
    return (bound < cap ? bound : cap) * 0.5;
}

ExtremalPhi build_phi_eps(const KernelParams& params, long long n, double target_e, const LogScaled& eps,
                          const ExtremalOptions& opts) {
    check_common(params, n, target_e);
    if (!(eps.mantissa > 0.0) || !(eps < LogScaled::from_value(1.0 / kTwoPi))) {
        throw DomainError("build_phi_eps: eps must lie in (0, 1/(2 pi))");
    }
    const auto q = std::make_shared<const ScaledTailKernel>(build_scaled_kernel(params.reflected(), n, opts.kernel));
    const auto qf = q->as_function();
    const double t0 = kPi * (1.0 - params.beta) / (2.0 * static_cast<double>(n));
    const double w = kPi / static_cast<double>(n);
    const long long slots = 2 * n;

    const auto peak = norms::uniform_norm_argmax(qf, q->default_grid());
    ExtremalPhi phi;
    phi.kind = PhiKind::two_level;
    phi.params = params;
    phi.n = n;
    phi.p = 1.0;
    phi.target_e = target_e;
    phi.K = q->K();
    phi.epsilon = eps;

    SegmentInfo& seg = phi.segment;
    seg.t_star = t0 + wrap(peak.location - t0);
    const long long j = std::clamp(static_cast<long long>(std::floor((seg.t_star - t0) / w)), 0LL, slots - 1);
    seg.k_star = j + 1;
    const double lo = t0 + static_cast<double>(j) * w;
    const double hi = lo + w;

    const double level = peak.value - eps.mantissa_at(q->log_factor());
    auto above = [&](double t) { return std::abs(qf(t)) > level; };
    // End of the component of {|Q| > level} through t*, inside [lo, hi].
    auto edge = [&](double dir) {
        const double limit = dir > 0.0 ? hi : lo;
        const double step = w / 256.0;
        double inside = seg.t_star;
        double outside = limit;
        for (;;) {
            const double next = inside + dir * step;
            if (dir > 0.0 ? next >= limit : next <= limit) {
                if (above(limit)) return limit;
                break;
            }
            if (!above(next)) {
                outside = next;
                break;
            }
            inside = next;
        }
        while (std::abs(outside - inside) > 1e-14) {
            const double m = 0.5 * (inside + outside);
            if (m == inside || m == outside) break;
            (above(m) ? inside : outside) = m;
        }
        return inside;
    };
    const double left = edge(-1.0);
    double right = edge(1.0);
    // Delta is half-open on the right, and delta < pi/n is required.
    if (right >= hi) right = hi - 1e-9 * w;
    if (right - left < 1e-13) throw ConvergenceError("build_phi_eps: segment l* degenerates; use a larger eps");
    seg.xi_star = left;
    seg.delta_len = right - left;

    const double ev = eps.value();
    const double big = target_e * (1.0 - ev * (kTwoPi - seg.delta_len)) / seg.delta_len;
    const double small = target_e * ev;

    for (long long jj = 0; jj < slots; ++jj) {
        const double a = t0 + static_cast<double>(jj) * w;
        const double b = a + w;
        // sign cos(nt + beta pi/2) = (-1)^k on Delta_k, k = jj + 1.
        const double s = jj % 2 == 0 ? -1.0 : 1.0;
        if (jj != j) {
            phi.pieces.push_back({a, b, s * small});
            continue;
        }
        if (left > a) phi.pieces.push_back({a, left, s * small});
        phi.pieces.push_back({left, right, s * big});
        phi.pieces.push_back({right, b, s * small});
    }

    for (long long jj = 0; jj < slots; ++jj) phi.breakpoints.push_back(t0 + static_cast<double>(jj) * w);
    phi.breakpoints.push_back(left);
    phi.breakpoints.push_back(right);
    phi.breakpoints = normalize_breakpoints(std::move(phi.breakpoints));

    phi.function.evaluator = [t0, w, slots, left, right, big, small](double t) {
        const double u = t0 + wrap(t - t0);
        const long long k = std::clamp(static_cast<long long>(std::floor((u - t0) / w)), 0LL, slots - 1);
        const double s = k % 2 == 0 ? -1.0 : 1.0;
        return s * (u >= left && u <= right ? big : small);
    };
    phi.function.breakpoints = phi.breakpoints;
    phi.function.bandwidth = n;

    NeumaierSum mass;
    for (const auto& pc : phi.pieces) mass.add(std::abs(pc.value) * (pc.b - pc.a));
    phi.norm = mass.value();
    if (std::abs(phi.norm - target_e) > opts.check_tol * target_e) {
        throw ConvergenceError("build_phi_eps: ||Phi_eps||_1 differs from the target");
    }
    phi.certificate = orthogonality_certificate(phi.function, n, 1.0);
    if (phi.certificate > opts.check_tol) throw ConvergenceError("build_phi_eps: orthogonality certificate failed");
    return phi;
}

LogScaled sharpness_value(const ExtremalPhi& phi, const ScaledTailKernel& kernel, double tol) {
    if (kernel.n() != phi.n || kernel.params().alpha != phi.params.alpha || kernel.params().r != phi.params.r) {
        throw DomainError("sharpness_value: kernel and Phi disagree on (alpha, r, n)");
    }
    // P_beta(-t) = P_{-beta}(t).
    const auto q = kernel.reflected();
    if (phi.kind == PhiKind::two_level) {
        NeumaierSum s;
        for (const auto& pc : phi.pieces) s.add(pc.value * kernel_integral(q, pc.a, pc.b));
        return {kernel.log_factor(), s.value() / kPi};
    }
    const auto qf = q.as_function();
    PiecewiseSmoothFunction prod;
    prod.evaluator = [&phi, &qf](double t) { return phi(t) * qf(t); };
    prod.breakpoints = phi.breakpoints;
    prod.bandwidth = phi.function.bandwidth + kernel.K();
    norms::AdaptiveOptions ao;
    ao.tol = tol;
    return {kernel.log_factor(), norms::integrate(prod, ao) / kPi};
}

LogScaled two_level_lower_bound(const ExtremalPhi& phi, const LogScaled& sup_norm) {
    const LogScaled& eps = phi.epsilon;
    const LogScaled loss = eps * sup_norm * ((2.0 + 1.0 / kPi) * kPi) + eps * (1.0 / kPi);
    return (sup_norm - loss) * phi.target_e;
}

ExtremalF::ExtremalF(const ExtremalPhi& phi, const KernelOptions& opts, double tol)
    : kernel_(build_scaled_kernel_at(phi.params, phi.n, std::min(phi.K, opts.max_index))),
      dev_(kernel_, phi_block(phi, kernel_, tol)),
      e_(phi.target_e) {
    if (phi.kind == PhiKind::two_level) {
        NeumaierSum s;
        for (const auto& pc : phi.pieces) s.add(pc.value * (pc.b - pc.a));
        a0_ = s.value() / kPi;
    } else {
        // int |Phi| rides along so that a vanishing mean does not stall the refinement.
        norms::AdaptiveOptions ao;
        ao.tol = tol;
        const auto res = norms::adaptive_integrate(
            phi.function.breakpoints, phi.function.bandwidth,
            [&phi](const norms::QuadratureRule& rule) {
                const auto v = norms::values_on_rule(phi.function, rule);
                NeumaierSum s, m;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    s.add(rule.weights[i] * v[i]);
                    m.add(rule.weights[i] * std::abs(v[i]));
                }
                return std::vector<double>{s.value(), m.value()};
            },
            ao);
        a0_ = res.values[0] / kPi;
    }
}

LogScaled ExtremalF::deviation_at(double x) const { return {dev_.log_factor(), dev_(x)}; }

LogScaled ExtremalF::deviation_sup(std::size_t N) const {
    if (N == 0) N = dev_.default_grid();
    return {dev_.log_factor(), dev_.sup(N).value};
}

ExtremalF build_F(const ExtremalPhi& phi, const KernelOptions& opts) { return ExtremalF(phi, opts); }

} // namespace lebesgue
