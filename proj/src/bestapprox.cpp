#include "lebesgue/bestapprox.hpp"

#include "lebesgue/fft.hpp"
#include "lebesgue/summation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace lebesgue {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

void check_args(long long n, double p) {
    if (n < 1) throw DomainError("best_approx: n must be >= 1");
    if (!(p >= 1.0) || std::isinf(p)) throw DomainError("best_approx: p must lie in [1, inf)");
}

std::size_t grid_size(long long bandwidth) {
    return fft::next_power_of_two(static_cast<std::size_t>(std::max<long long>(16 * std::max<long long>(bandwidth, 1), 4096)));
}

// The sign changes of d merged into its breakpoints.
PiecewiseSmoothFunction with_sign_changes(PiecewiseSmoothFunction d) {
    const auto bp = normalize_breakpoints(d.breakpoints);
    std::vector<double> all = bp;
    for (double z : norms::zeros_of(d, grid_size(d.bandwidth))) {
        bool known = false;
        if (!bp.empty()) {
            const auto it = std::lower_bound(bp.begin(), bp.end(), z);
            const double right = it == bp.end() ? bp.front() + kTwoPi : *it;
            const double left = it == bp.begin() ? bp.back() - kTwoPi : *(it - 1);
            known = right - z < 1e-12 || z - left < 1e-12;
        }
        if (!known) all.push_back(z);
    }
    d.breakpoints = normalize_breakpoints(std::move(all));
    return d;
}

struct Interval {
    double a;
    double b;
    int sign;
};

// Pieces between consecutive breakpoints (cyclically) with the sign of d.
std::vector<Interval> sign_pattern(const PiecewiseSmoothFunction& d) {
    const auto& bp = d.breakpoints;
    std::vector<Interval> out;
    if (bp.empty()) {
        const double v = d(kPi);
        out.push_back({0.0, kTwoPi, (v > 0.0) - (v < 0.0)});
        return out;
    }
    for (std::size_t i = 0; i < bp.size(); ++i) {
        const double a = bp[i];
        const double b = i + 1 < bp.size() ? bp[i + 1] : bp[0] + kTwoPi;
        const double v = d(0.5 * (a + b));
        out.push_back({a, b, (v > 0.0) - (v < 0.0)});
    }
    return out;
}

// Pairings of g = |delta|^{p-1} sign delta with the low harmonics.
struct Dual {
    std::vector<double> c;  // int g cos kt, k < n
    std::vector<double> s;  // int g sin kt
    double mass = 0.0;      // int |g|

    [[nodiscard]] double certificate() const {
        if (!(mass > 0.0)) return 0.0;
        double m = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) m = std::max({m, std::abs(c[k]), std::abs(s[k])});
        return m / mass;
    }
};

Dual sign_dual(const PiecewiseSmoothFunction& d, long long n) {
    Dual out;
    const auto nn = static_cast<std::size_t>(n);
    std::vector<NeumaierSum> c(nn), s(nn);
    NeumaierSum mass;
    for (const auto& iv : sign_pattern(d)) {
        if (iv.sign == 0) continue;
        const double sg = iv.sign;
        const double len = iv.b - iv.a;
        const double mid = 0.5 * (iv.a + iv.b);
        mass.add(len);
        c[0].add(sg * len);
        for (std::size_t k = 1; k < nn; ++k) {
            const double kd = static_cast<double>(k);
            const double f = 2.0 * std::sin(0.5 * kd * len) / kd;
            c[k].add(sg * f * std::cos(kd * mid));
            s[k].add(sg * f * std::sin(kd * mid));
        }
    }
    out.c.resize(nn);
    out.s.resize(nn);
    for (std::size_t k = 0; k < nn; ++k) {
        out.c[k] = c[k].value();
        out.s[k] = s[k].value();
    }
    out.mass = mass.value();
    return out;
}

PiecewiseSmoothFunction mapped(const PiecewiseSmoothFunction& d, double (*op)(double, double), double p) {
    PiecewiseSmoothFunction g = d;
    g.evaluator = [d, op, p](double t) { return op(d(t), p); };
    if (d.sampler) {
        g.sampler = [d, op, p](std::size_t N, double shift) {
            auto v = d.sampler(N, shift);
            for (double& x : v) x = op(x, p);
            return v;
        };
    }
    return g;
}

double signed_power(double v, double e) { return std::copysign(std::pow(std::abs(v), e), v); }
double abs_power(double v, double e) { return std::pow(std::abs(v), e); }

Dual power_dual(const PiecewiseSmoothFunction& d, long long n, double p, double tol) {
    const auto g = mapped(d, signed_power, p - 1.0);
    const auto h = trig::harmonic_block(g, 0, n - 1, tol);
    Dual out;
    out.c.resize(h.A.size());
    out.s.resize(h.B.size());
    for (std::size_t k = 0; k < h.A.size(); ++k) {
        out.c[k] = kPi * h.A[k];
        out.s[k] = kPi * h.B[k];
    }
    norms::AdaptiveOptions ao;
    ao.tol = tol;
    out.mass = norms::integrate(mapped(d, abs_power, p - 1.0), ao);
    return out;
}

Dual dual_of(const PiecewiseSmoothFunction& d, long long n, double p, double tol) {
    return p == 1.0 ? sign_dual(d, n) : power_dual(d, n, p, tol);
}

// Coefficient vector x: x0 = a0 (basis 1/2), x_{2k-1} = a_k, x_{2k} = b_k.
TrigPoly to_poly(const Vec& x, long long n) {
    auto t = TrigPoly::zero(static_cast<int>(n - 1));
    t.a[0] = x(0);
    for (long long k = 1; k < n; ++k) {
        t.a[static_cast<std::size_t>(k)] = x(2 * k - 1);
        t.b[static_cast<std::size_t>(k)] = x(2 * k);
    }
    return t;
}

Vec to_vec(const TrigPoly& t, long long n) {
    Vec x = Vec::Zero(2 * n - 1);
    x(0) = t.a[0];
    for (long long k = 1; k < n && k <= t.max_degree(); ++k) {
        x(2 * k - 1) = t.a[static_cast<std::size_t>(k)];
        x(2 * k) = t.b[static_cast<std::size_t>(k)];
    }
    return x;
}

TrigPoly truncated(const TrigPoly& t, long long n) { return to_poly(to_vec(t, n), n); }

// Gradient of (1/p) int |phi - t|^p.
Vec gradient(const Dual& d) {
    const auto n = static_cast<long long>(d.c.size());
    Vec G(2 * n - 1);
    G(0) = -0.5 * d.c[0];
    for (long long k = 1; k < n; ++k) {
        G(2 * k - 1) = -d.c[static_cast<std::size_t>(k)];
        G(2 * k) = -d.s[static_cast<std::size_t>(k)];
    }
    return G;
}

// int w b_i b_j from the moments mc[m] = int w cos mt, ms[m] = int w sin mt, m <= 2n-2.
Mat hessian_from_moments(const std::vector<double>& mc, const std::vector<double>& ms, long long n) {
    auto C = [&](long long m) { return mc[static_cast<std::size_t>(std::abs(m))]; };
    auto S = [&](long long m) { return m >= 0 ? ms[static_cast<std::size_t>(m)] : -ms[static_cast<std::size_t>(-m)]; };
    const auto dim = 2 * n - 1;
    Mat H(dim, dim);
    H(0, 0) = C(0) / 4.0;
    for (long long k = 1; k < n; ++k) {
        H(0, 2 * k - 1) = H(2 * k - 1, 0) = C(k) / 2.0;
        H(0, 2 * k) = H(2 * k, 0) = S(k) / 2.0;
        for (long long l = 1; l < n; ++l) {
            H(2 * k - 1, 2 * l - 1) = (C(k - l) + C(k + l)) / 2.0;
            H(2 * k, 2 * l) = (C(k - l) - C(k + l)) / 2.0;
            H(2 * k - 1, 2 * l) = H(2 * l, 2 * k - 1) = (S(l + k) + S(l - k)) / 2.0;
        }
    }
    return H;
}

void basis_values(double t, long long n, Vec& v) {
    v(0) = 0.5;
    for (long long k = 1; k < n; ++k) {
        v(2 * k - 1) = std::cos(static_cast<double>(k) * t);
        v(2 * k) = std::sin(static_cast<double>(k) * t);
    }
}

// Generalized Hessian of int |phi - t|: moving a simple zero z of delta
// changes the gradient by 2 b(z) b(z)^T / |delta'(z)|.
Mat zero_hessian(const PiecewiseSmoothFunction& d, long long n) {
    const auto dim = 2 * n - 1;
    Mat H = Mat::Zero(dim, dim);
    Vec v(dim);
    const double h = 1e-7 * kTwoPi / static_cast<double>(std::max<long long>(d.bandwidth, 1));
    for (double z : d.breakpoints) {
        const double l = d(z - h);
        const double r = d(z + h);
        if ((l > 0.0) == (r > 0.0) || l == 0.0 || r == 0.0) continue;
        const double slope = std::abs(r - l) / (2.0 * h);
        basis_values(z, n, v);
        H.selfadjointView<Eigen::Lower>().rankUpdate(v, 2.0 / slope);
    }
    return H.selfadjointView<Eigen::Lower>();
}

// int w b_i b_j with w = (p-1) |d|^{p-2}, on a fixed panel rule through the
// sign changes of d; the weight is integrable there since p > 1.
Mat panel_hessian(const PiecewiseSmoothFunction& d, long long n, double p) {
    const auto rule = norms::periodic_rule(d.breakpoints, std::max(d.bandwidth, 2 * n), 1);
    const auto v = norms::values_on_rule(d, rule);
    const auto m = static_cast<std::size_t>(2 * n - 1);
    std::vector<double> mc(m, 0.0), ms(m, 0.0);
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] == 0.0) continue;
        const double wv = rule.weights[j] * (p - 1.0) * std::pow(std::abs(v[j]), p - 2.0);
        const double t = rule.nodes[j];
        const std::complex<double> step = std::polar(1.0, t);
        std::complex<double> z = 1.0;
        for (std::size_t k = 0; k < m; ++k) {
            if (k % 64 == 0) z = std::polar(1.0, static_cast<double>(k) * t);
            mc[k] += wv * z.real();
            ms[k] += wv * z.imag();
            z *= step;
        }
    }
    return hessian_from_moments(mc, ms, n);
}

Vec newton_direction(const Mat& H, const Vec& G) {
    const double diag = std::max(H.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    double lambda = 1e-12 * diag;
    for (int i = 0; i < 8; ++i, lambda *= 100.0) {
        Mat A = H;
        A.diagonal().array() += lambda;
        Eigen::LLT<Mat> llt(A);
        if (llt.info() != Eigen::Success) continue;
        Vec d = llt.solve(-G);
        if (d.allFinite() && d.dot(G) < 0.0) return d;
    }
    return -G / diag;
}

struct GridEval {
    double J = 0.0;
    Dual dual;
    std::vector<double> mc;
    std::vector<double> ms;
};

GridEval grid_eval(const std::vector<double>& delta, long long n, double p, double mu, bool with_hessian) {
    const std::size_t N = delta.size();
    const double h = kTwoPi / static_cast<double>(N);
    std::vector<double> g(N), ag(N), jp(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double a = std::abs(delta[j]);
        const double ap = std::pow(a, p - 1.0);
        g[j] = std::copysign(ap, delta[j]);
        ag[j] = ap;
        jp[j] = ap * a;
    }
    GridEval out;
    out.J = h * pairwise_sum(jp) / p;
    out.dual.mass = h * pairwise_sum(ag);
    const auto X = fft::analyze_real(g);
    const auto nn = static_cast<std::size_t>(n);
    out.dual.c.resize(nn);
    out.dual.s.resize(nn);
    for (std::size_t k = 0; k < nn; ++k) {
        out.dual.c[k] = h * X[k].real();
        out.dual.s[k] = -h * X[k].imag();
    }
    if (with_hessian) {
        std::vector<double> w(N);
        for (std::size_t j = 0; j < N; ++j) {
            const double d2 = delta[j] * delta[j];
            w[j] = (p - 1.0) * (p < 2.0 ? std::pow(d2 + mu * mu, (p - 2.0) / 2.0) : std::pow(d2, (p - 2.0) / 2.0));
        }
        const auto W = fft::analyze_real(w);
        const auto m = 2 * nn - 1;
        out.mc.resize(m);
        out.ms.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            out.mc[k] = h * W[k].real();
            out.ms[k] = -h * W[k].imag();
        }
    }
    return out;
}

bool improves(double J_new, double cert_new, double J_old, double cert_old, double noise) {
    const double slack = noise * std::abs(J_old);
    if (J_new < J_old - slack) return true;
    return J_new <= J_old + slack && cert_new < cert_old;
}

double rms(const std::vector<double>& v) {
    std::vector<double> sq(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) sq[j] = v[j] * v[j];
    return std::sqrt(pairwise_sum(sq) / static_cast<double>(v.size()));
}

// int |d| for a trigonometric polynomial, exactly between its sign changes.
double l1_exact(const TrigPoly& d, const std::vector<Interval>& pattern) {
    auto F = [&d](double t) {
        NeumaierSum s;
        s.add(d.a[0] * t / 2.0);
        for (int k = 1; k <= d.max_degree(); ++k) {
            const auto ks = static_cast<std::size_t>(k);
            const double kt = static_cast<double>(k) * t;
            s.add((d.a[ks] * std::sin(kt) - d.b[ks] * std::cos(kt)) / static_cast<double>(k));
        }
        return s.value();
    };
    NeumaierSum total;
    for (const auto& iv : pattern) {
        if (iv.sign != 0) total.add(iv.sign * (F(iv.b) - F(iv.a)));
    }
    return total.value();
}

class Problem {
public:
    Problem(const TrigPoly& phi, long long n, double p) : poly_(phi), fn_(phi.as_function()), n_(n), p_(p) {}
    Problem(const PiecewiseSmoothFunction& phi, long long n, double p) : fn_(phi), n_(n), p_(p) {}

    [[nodiscard]] long long bandwidth() const { return std::max(fn_.bandwidth, n_); }
    [[nodiscard]] const PiecewiseSmoothFunction& phi() const { return fn_; }

    [[nodiscard]] PiecewiseSmoothFunction residual(const TrigPoly& t) const {
        if (poly_) return (*poly_ - t).as_function();
        PiecewiseSmoothFunction d;
        d.evaluator = [f = fn_, tf = t.as_function()](double x) { return f(x) - tf(x); };
        d.breakpoints = fn_.breakpoints;
        d.bandwidth = bandwidth();
        d.sampler = [f = fn_, tf = t.as_function()](std::size_t N, double shift) {
            auto v = f.sample(N, shift);
            const auto tv = tf.sample(N, shift);
            for (std::size_t j = 0; j < N; ++j) v[j] -= tv[j];
            return v;
        };
        return d;
    }

    [[nodiscard]] std::vector<double> residual_grid(const TrigPoly& t, std::size_t N) {
        if (phi_grid_.size() != N) phi_grid_ = fn_.sample(N, 0.0);
        auto v = phi_grid_;
        const auto tv = trig::synthesize(t, N).values;
        for (std::size_t j = 0; j < N; ++j) v[j] -= tv[j];
        return v;
    }

    /// (1/p) int |phi - t|^p, with d the residual carrying its sign changes.
    [[nodiscard]] double objective(const TrigPoly& t, const PiecewiseSmoothFunction& d, double tol) const {
        if (poly_ && p_ == 1.0) return l1_exact(*poly_ - t, sign_pattern(d));
        return std::pow(norms::lp_norm(d, p_, tol), p_) / p_;
    }

    [[nodiscard]] TrigPoly fourier_start() const {
        if (poly_) return trig::partial_sum(*poly_, n_);
        const auto h = trig::harmonic_block(fn_, 0, n_ - 1);
        auto t = TrigPoly::zero(static_cast<int>(n_ - 1));
        for (std::size_t k = 0; k < h.A.size(); ++k) {
            t.a[k] = h.A[k];
            t.b[k] = k == 0 ? 0.0 : h.B[k];
        }
        return t;
    }

    [[nodiscard]] const std::optional<TrigPoly>& poly() const { return poly_; }

private:
    std::optional<TrigPoly> poly_;
    PiecewiseSmoothFunction fn_;
    long long n_;
    double p_;
    std::vector<double> phi_grid_;
};

struct State {
    TrigPoly t;
    PiecewiseSmoothFunction d;
    Dual dual;
    double J = 0.0;
    double cert = 0.0;
};

State accurate_state(const Problem& pr, TrigPoly t, long long n, double p, double tol) {
    State s;
    s.d = with_sign_changes(pr.residual(t));
    s.dual = dual_of(s.d, n, p, tol);
    s.J = pr.objective(t, s.d, tol);
    s.cert = s.dual.certificate();
    s.t = std::move(t);
    return s;
}

double e_from_objective(double J, double p) { return std::pow(std::max(p * J, 0.0), 1.0 / p); }

ApproxResult solve(Problem& pr, long long n, double p, const ApproxOptions& opts) {
    ApproxResult res;
    TrigPoly start = opts.initial ? truncated(*opts.initial, n) : pr.fourier_start();
    const std::size_t N = grid_size(pr.bandwidth());

    const double phi_rms = rms(pr.phi().sample(N, 0.0));
    auto dgrid = pr.residual_grid(start, N);
    const double scale = rms(dgrid);
    if (scale <= 1e-13 * phi_rms) {
        // phi is a polynomial of degree < n up to rounding.
        res.minimizer = start;
        res.converged = true;
        return res;
    }

    State cur = accurate_state(pr, start, n, p, opts.quad_tol);
    const std::array<double, 3> smoothing{1e-2, 1e-4, 1e-6};

    if (p > 1.0 && cur.cert >= opts.tol) {
        // Grid phase: Newton steps against the trapezoidal discretization.
        Vec x = to_vec(start, n);
        for (std::size_t stage = 0; stage < (p < 2.0 ? smoothing.size() : 1); ++stage) {
            const double mu = p < 2.0 ? smoothing[stage] * scale : 0.0;
            for (int it = 0; it < 15 && res.iterations < opts.max_iterations; ++it) {
                const auto e = grid_eval(dgrid, n, p, mu, true);
                const double cert = e.dual.certificate();
                if (cert < 0.1 * opts.tol) break;
                const Vec G = gradient(e.dual);
                const Vec dir = newton_direction(hessian_from_moments(e.mc, e.ms, n), G);
                bool accepted = false;
                double step = 1.0;
                for (int ls = 0; ls < 30 && !accepted; ++ls, step /= 2.0) {
                    const Vec xt = x + step * dir;
                    auto dt = pr.residual_grid(to_poly(xt, n), N);
                    const auto et = grid_eval(dt, n, p, mu, false);
                    if (improves(et.J, et.dual.certificate(), e.J, cert, 1e-14)) {
                        x = xt;
                        dgrid = std::move(dt);
                        accepted = true;
                    }
                }
                if (!accepted) break;
                ++res.iterations;
            }
        }
        cur = accurate_state(pr, to_poly(x, n), n, p, opts.quad_tol);
    }

    // Polishing with breakpoint-aware quadrature until the certificate holds.
    while (cur.cert >= opts.tol && res.iterations < opts.max_iterations) {
        Mat H;
        if (p == 1.0) {
            H = zero_hessian(cur.d, n);
        } else {
            H = panel_hessian(cur.d, n, p);
        }
        const Vec x = to_vec(cur.t, n);
        const Vec dir = newton_direction(H, gradient(cur.dual));
        bool accepted = false;
        double step = 1.0;
        for (int ls = 0; ls < 20 && !accepted; ++ls, step /= 2.0) {
            State trial = accurate_state(pr, to_poly(x + step * dir, n), n, p, opts.quad_tol);
            if (improves(trial.J, trial.cert, cur.J, cur.cert, 10.0 * opts.quad_tol)) {
                cur = std::move(trial);
                accepted = true;
            }
        }
        if (!accepted) break;
        ++res.iterations;
    }

    res.minimizer = cur.t;
    res.certificate_residual = cur.cert;
    res.converged = cur.cert < opts.tol;
    res.e_value = e_from_objective(cur.J, p);
    return res;
}

} // namespace

ApproxResult best_approx(const TrigPoly& phi, long long n, double p, const ApproxOptions& opts) {
    check_args(n, p);
    if (p == 2.0 && !opts.force_descent) {
        ApproxResult res;
        res.minimizer = truncated(trig::partial_sum(phi, n), n);
        NeumaierSum tail;
        for (int k = static_cast<int>(n); k <= phi.max_degree(); ++k) {
            const auto ks = static_cast<std::size_t>(k);
            tail.add(phi.a[ks] * phi.a[ks] + phi.b[ks] * phi.b[ks]);
        }
        res.e_value = std::sqrt(kPi * tail.value());
        res.certificate_residual = res.e_value == 0.0 ? 0.0 : orthogonality_certificate(phi - res.minimizer, n, 2.0);
        res.converged = res.certificate_residual < opts.tol;
        return res;
    }
    Problem pr(phi, n, p);
    return solve(pr, n, p, opts);
}

ApproxResult best_approx(const PiecewiseSmoothFunction& phi, long long n, double p, const ApproxOptions& opts) {
    check_args(n, p);
    Problem pr(phi, n, p);
    if (p == 2.0 && !opts.force_descent) {
        ApproxResult res;
        res.minimizer = pr.fourier_start();
        const auto s = accurate_state(pr, res.minimizer, n, p, opts.quad_tol);
        res.e_value = e_from_objective(s.J, p);
        res.certificate_residual = s.cert;
        res.converged = s.cert < opts.tol;
        return res;
    }
    return solve(pr, n, p, opts);
}

double orthogonality_certificate(const PiecewiseSmoothFunction& delta, long long n, double p, double tol) {
    check_args(n, p);
    return dual_of(with_sign_changes(delta), n, p, tol).certificate();
}

double orthogonality_certificate(const TrigPoly& delta, long long n, double p) {
    check_args(n, p);
    if (p != 2.0) return orthogonality_certificate(delta.as_function(), n, p);
    // g = delta: the pairings are its own coefficients.
    const double mass = norms::lp_norm(delta.as_function(), 1.0, 1e-12);
    if (!(mass > 0.0)) return 0.0;
    double m = 0.0;
    for (long long k = 0; k < n && k <= delta.max_degree(); ++k) {
        const auto ks = static_cast<std::size_t>(k);
        m = std::max({m, std::abs(delta.a[ks]), std::abs(delta.b[ks])});
    }
    return kPi * m / mass;
}

} // namespace lebesgue
