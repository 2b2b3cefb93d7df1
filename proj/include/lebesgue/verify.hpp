#pragma once

#include "lebesgue/core.hpp"
#include "lebesgue/kernel.hpp"
#include "lebesgue/norms.hpp"
#include "lebesgue/trig.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lebesgue {

/// One theorem check. lhs, main_term and band_unit share the log factor -alpha n^r;
/// main_term and band_unit are per unit E.
struct VerificationReport {
    std::string case_id;
    KernelParams params;
    long long n = 1;
    double p = 1.0;
    long long n0 = 0;
    LogScaled lhs;
    double e_n = 0.0;
    LogScaled main_term;
    LogScaled band_unit;
    double implied_gamma = 0.0;  ///< NaN when undefined (E = 0)
    double gamma_band = ImpliedConstantBands::gamma_band;
    std::optional<double> refined_band;
    bool pass = false;
    bool claim_applies = false;  ///< n >= n0, or an unconditional check failed
    std::string notes;
    long long wall_time_ms = 0;
};

struct VerifyOptions {
    KernelOptions kernel;
    double slack = 1e-9;          ///< relative slack on every inequality
    double identity_tol = 1e-6;   ///< sharpness identities
    double quad_tol = 1e-10;
    bool timing = false;          ///< wall_time_ms stays 0 otherwise
};

/// Lebesgue-type inequality for 1 < p < inf: LHS = ||f - S_{n-1} f||_C of
/// f = J(phi), RHS = (main + (14 pi)^2 band_unit) E_n(phi)_p. The Hoelder bound
/// (1/pi)||P^(n)||_{p'} E_n is checked as well.
[[nodiscard]] VerificationReport verify_theorem1(const KernelParams& params, long long n, double p,
                                                 const TrigPoly& phi, const VerifyOptions& opts = {});
[[nodiscard]] VerificationReport verify_theorem1(const KernelParams& params, long long n, double p,
                                                 const PiecewiseSmoothFunction& phi, const VerifyOptions& opts = {});

/// p = 1 counterpart; the Hoelder bound uses the uniform norm of the kernel.
[[nodiscard]] VerificationReport verify_theorem2(const KernelParams& params, long long n, const TrigPoly& phi,
                                                 const VerifyOptions& opts = {});
[[nodiscard]] VerificationReport verify_theorem2(const KernelParams& params, long long n,
                                                 const PiecewiseSmoothFunction& phi, const VerifyOptions& opts = {});

/// Extremal power function: ||F - S_{n-1} F||_C = (1/pi)||P^(n)||_{p'} E.
/// Falls back to the Parseval identity at p = 2 when the grids are infeasible.
[[nodiscard]] VerificationReport verify_sharpness1(const KernelParams& params, long long n, double p,
                                                   double target_e, const VerifyOptions& opts = {});

/// Two-level extremal function: the sharpness integral against the lower
/// bound n^{1-r}(1/(pi alpha r) - (14 pi)^2 (...)) E and the Hoelder bound.
/// A nonpositive lower bound is reported as vacuous.
[[nodiscard]] VerificationReport verify_sharpness2(const KernelParams& params, long long n, double target_e,
                                                   const VerifyOptions& opts = {});

/// Implied constant of the kernel norm itself: uniform norm at p = 1,
/// Parseval at p = 2, quadrature of |Q|^{p'} otherwise.
[[nodiscard]] VerificationReport verify_gamma(const KernelParams& params, long long n, double p,
                                              const VerifyOptions& opts = {});

/// (main + (14 pi)^2 band_unit) at E = 1.
[[nodiscard]] LogScaled class_bound(const KernelParams& params, long long n, double p);

/// Counter-based generator: the i-th draw depends only on (seed, i).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}
    [[nodiscard]] std::uint64_t bits(std::uint64_t counter) const noexcept;
    /// Uniform in [-1, 1).
    [[nodiscard]] double symmetric(std::uint64_t counter) const noexcept;

private:
    std::uint64_t seed_;
};

/// Coefficients uniform in [-1, 1), drawn in the order a0, a1, b1, a2, b2, ...
[[nodiscard]] TrigPoly random_trig_poly(int degree, std::uint64_t seed);

enum class CheckKind { theorem1, theorem2, sharpness1, sharpness2, gamma };

[[nodiscard]] std::string_view to_string(CheckKind kind) noexcept;
/// Throws DomainError for an unknown name.
[[nodiscard]] CheckKind parse_check(std::string_view name);

/// Theorem checks use random_trig_poly(3n, seed) scaled by target_e.
struct SweepCase {
    std::string case_id;
    CheckKind check = CheckKind::gamma;
    KernelParams params;
    double p = 1.0;
    long long n = 1;
    double target_e = 1.0;
    std::uint64_t seed = 0;
};

struct SweepOptions {
    VerifyOptions verify;
    unsigned threads = 1;
};

[[nodiscard]] VerificationReport run_case(const SweepCase& c, const VerifyOptions& opts = {});

/// Runs the cases on up to opts.threads threads; reports come back in input
/// order. A case that throws yields a failed report with the error in notes.
[[nodiscard]] std::vector<VerificationReport> sweep(const std::vector<SweepCase>& cases, const SweepOptions& opts = {});

} // namespace lebesgue
