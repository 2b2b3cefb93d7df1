#pragma once

#include "lebesgue/core.hpp"
#include "lebesgue/kernel.hpp"
#include "lebesgue/norms.hpp"
#include "lebesgue/trig.hpp"

#include <vector>

namespace lebesgue {

enum class PhiKind { power, two_level };

/// The segment l* = [xi_star, xi_star + delta_len] inside
/// Delta_{k*} = [(k*-1) pi/n + t0, k* pi/n + t0), t0 = pi (1 - beta) / (2n).
struct SegmentInfo {
    double t_star = 0.0;  ///< argmax of |P_{alpha,r,-beta}^(n)| in [t0, t0 + 2 pi)
    long long k_star = 0;
    double xi_star = 0.0;
    double delta_len = 0.0;
};

/// Piece [a, b) of a piecewise-constant function, in window coordinates.
struct ConstantPiece {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
};

struct ExtremalPhi {
    PhiKind kind = PhiKind::power;
    KernelParams params;  ///< beta as given; Phi is built from the kernel with -beta
    long long n = 1;
    double p = 2.0;       ///< 1 for two_level
    double target_e = 1.0;
    long long K = 1;      ///< truncation index of the kernel used
    std::vector<double> breakpoints;

    // power
    double kernel_norm = 0.0;  ///< ||Q_{-beta}||_{p'} of the scaled kernel

    // two_level
    LogScaled epsilon;
    SegmentInfo segment;
    std::vector<ConstantPiece> pieces;  ///< cover [t0, t0 + 2 pi)

    double norm = 0.0;         ///< measured ||Phi||_p
    double certificate = 0.0;  ///< orthogonality certificate of the zero polynomial

    PiecewiseSmoothFunction function;
    double operator()(double t) const { return function(t); }
};

struct ExtremalOptions {
    KernelOptions kernel;
    double check_tol = 1e-8;  ///< norm identity and certificate
    double quad_tol = 1e-11;
};

/// Phi = ||Q||_{p'}^{1-p'} |Q|^{p'-1} sign(Q) E with Q the scaled kernel for -beta.
/// Throws ConvergenceError when ||Phi||_p = E or the certificate fails.
[[nodiscard]] ExtremalPhi build_phi(const KernelParams& params, long long n, double p, double target_e,
                                    const ExtremalOptions& opts = {});

/// Half of the admissible bound on epsilon for the two-level function,
/// and never above 1/(4 pi).
[[nodiscard]] LogScaled choose_eps(const KernelParams& params, long long n, const KernelOptions& opts = {});

/// Two-level function: E (1 - eps (2 pi - delta)) / delta sign cos(nt + beta pi/2)
/// on l*, E eps sign cos(nt + beta pi/2) elsewhere. l* is the component of
/// {|Q_{-beta}| > ||Q_{-beta}||_C - eps e^{alpha n^r}} around t*, clipped to
/// Delta_{k*} and kept away from its right end so that delta < pi/n.
/// Throws ConvergenceError if l* is narrower than 1e-13.
[[nodiscard]] ExtremalPhi build_phi_eps(const KernelParams& params, long long n, double target_e,
                                        const LogScaled& eps, const ExtremalOptions& opts = {});

/// (1/pi) int Phi(t) P^(n)_{alpha,r,beta}(-t) dt with the kernel for +beta.
/// Exact piecewise integration for the two-level function, quadrature
/// between the zeros of the kernel for the power function.
[[nodiscard]] LogScaled sharpness_value(const ExtremalPhi& phi, const ScaledTailKernel& kernel, double tol = 1e-12);

/// Lower bound (1/pi)||P||_C - eps ((2 + 1/pi)||P||_C + 1/pi) on the
/// sharpness value of the two-level function, times E.
[[nodiscard]] LogScaled two_level_lower_bound(const ExtremalPhi& phi, const LogScaled& sup_norm);

/// F = J(Phi - a0/2). Its deviation from the partial Fourier sum S_{n-1} is
/// assembled from the harmonics n..K of Phi; F itself is never formed.
class ExtremalF {
public:
    ExtremalF(const ExtremalPhi& phi, const KernelOptions& opts = {}, double tol = 1e-10);

    /// (1/pi) int Phi.
    [[nodiscard]] double a0() const noexcept { return a0_; }
    /// E_n of the generalized derivative, equal to the target of Phi.
    [[nodiscard]] double best_approximation() const noexcept { return e_; }
    [[nodiscard]] const ScaledTailKernel& kernel() const noexcept { return kernel_; }
    [[nodiscard]] const trig::TailDeviation& deviation() const noexcept { return dev_; }

    [[nodiscard]] LogScaled deviation_at(double x) const;
    /// ||F - S_{n-1} F||_C by a grid scan (default max(8K, 4096) points) and refinement.
    [[nodiscard]] LogScaled deviation_sup(std::size_t N = 0) const;

private:
    ScaledTailKernel kernel_;
    trig::TailDeviation dev_;
    double a0_ = 0.0;
    double e_ = 0.0;
};

[[nodiscard]] ExtremalF build_F(const ExtremalPhi& phi, const KernelOptions& opts = {});

} // namespace lebesgue
