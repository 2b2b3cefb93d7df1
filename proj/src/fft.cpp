#include "lebesgue/fft.hpp"

#include "lebesgue/core.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <cstring>
#include <numbers>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace lebesgue::fft {

namespace {

// FFTW planning is not thread safe; execution of an existing plan on new
// arrays is. Plans are created once per (kind, N) with FFTW_ESTIMATE, which
// makes the chosen algorithm independent of timing.
enum class Kind { c2c_backward, c2r, r2c };

struct PlanCache {
    std::mutex mutex;
    std::map<std::pair<Kind, std::size_t>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};
template <class T>
using Buffer = std::unique_ptr<T[], FftwFree>;

template <class T>
Buffer<T> allocate(std::size_t count) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
    if (p == nullptr) throw ResolutionError("fft: allocation failed");
    std::memset(static_cast<void*>(p), 0, sizeof(T) * count);
    return Buffer<T>(p);
}

fftw_plan plan_for(Kind kind, std::size_t N) {
    auto& c = cache();
    std::lock_guard lock(c.mutex);
    auto it = c.plans.find({kind, N});
    if (it != c.plans.end()) return it->second;
    const int n = static_cast<int>(N);
    fftw_plan plan = nullptr;
    auto cbuf = allocate<fftw_complex>(N);
    auto rbuf = allocate<double>(N);
    switch (kind) {
    case Kind::c2c_backward:
        plan = fftw_plan_dft_1d(n, cbuf.get(), cbuf.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
        break;
    case Kind::c2r:
        plan = fftw_plan_dft_c2r_1d(n, cbuf.get(), rbuf.get(), FFTW_ESTIMATE);
        break;
    case Kind::r2c:
        plan = fftw_plan_dft_r2c_1d(n, rbuf.get(), cbuf.get(), FFTW_ESTIMATE);
        break;
    }
    if (plan == nullptr) throw ResolutionError("fft: planning failed");
    c.plans.emplace(std::make_pair(kind, N), plan);
    return plan;
}

void check_size(std::size_t N) {
    if (N < 2 || N > (std::size_t{1} << 30)) throw ResolutionError("fft: unsupported transform size");
}

} // namespace

std::vector<std::complex<double>> synthesize_complex(std::span<const std::complex<double>> coeffs, std::size_t N) {
    check_size(N);
    if (coeffs.size() > N) throw DomainError("fft: more coefficients than grid points");
    auto buf = allocate<fftw_complex>(N);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        buf[k][0] = coeffs[k].real();
        buf[k][1] = coeffs[k].imag();
    }
    fftw_execute_dft(plan_for(Kind::c2c_backward, N), buf.get(), buf.get());
    std::vector<std::complex<double>> out(N);
    for (std::size_t j = 0; j < N; ++j) out[j] = {buf[j][0], buf[j][1]};
    return out;
}

std::vector<double> synthesize_real(std::span<const std::complex<double>> coeffs, std::size_t N) {
    check_size(N);
    if (2 * coeffs.size() > N) throw DomainError("fft: harmonic at or above the Nyquist index");
    auto in = allocate<fftw_complex>(N / 2 + 1);
    auto out = allocate<double>(N);
    // c2r computes X_0 + 2 Re sum_{k>=1} X_k e^{ik t_j} for Hermitian input.
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double s = (k == 0) ? 1.0 : 0.5;
        in[k][0] = s * coeffs[k].real();
        in[k][1] = (k == 0) ? 0.0 : s * coeffs[k].imag();
    }
    fftw_execute_dft_c2r(plan_for(Kind::c2r, N), in.get(), out.get());
    return std::vector<double>(out.get(), out.get() + N);
}

std::vector<std::complex<double>> analyze_real(std::span<const double> values) {
    const std::size_t N = values.size();
    check_size(N);
    auto in = allocate<double>(N);
    auto out = allocate<fftw_complex>(N / 2 + 1);
    std::memcpy(in.get(), values.data(), sizeof(double) * N);
    fftw_execute_dft_r2c(plan_for(Kind::r2c, N), in.get(), out.get());
    std::vector<std::complex<double>> X(N / 2 + 1);
    for (std::size_t k = 0; k <= N / 2; ++k) X[k] = {out[k][0], out[k][1]};
    return X;
}

namespace {

// (-1)^j binom(15, j).
constexpr std::array<double, 16> kBary{1.0,     -15.0,  105.0,  -455.0, 1365.0, -3003.0, 5005.0, -6435.0,
                                       6435.0,  -5005.0, 3003.0, -1365.0, 455.0, -105.0, 15.0,   -1.0};

} // namespace

PeriodicInterpolant::PeriodicInterpolant(std::vector<double> values) : v_(std::move(values)) {
    if (v_.size() < 16) throw DomainError("PeriodicInterpolant: need at least 16 samples");
    inv_h_ = static_cast<double>(v_.size()) / (2.0 * std::numbers::pi);
}

double PeriodicInterpolant::operator()(double t) const {
    const auto N = static_cast<long long>(v_.size());
    double u = std::fmod(t * inv_h_, static_cast<double>(N));
    if (u < 0.0) u += static_cast<double>(N);
    const double fl = std::floor(u);
    const double f = u - fl;
    const auto i = static_cast<long long>(fl);
    if (f == 0.0) return v_[static_cast<std::size_t>(i % N)];
    double num = 0.0;
    double den = 0.0;
    for (int j = 0; j < 16; ++j) {
        const double w = kBary[static_cast<std::size_t>(j)] / (f + 7.0 - j);
        num += w * v_[static_cast<std::size_t>(((i - 7 + j) % N + N) % N)];
        den += w;
    }
    return num / den;
}

} // namespace lebesgue::fft
