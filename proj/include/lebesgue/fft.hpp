#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Thin wrappers over FFTW for periodic grids t_j = 2 pi j / N.
namespace lebesgue::fft {

[[nodiscard]] constexpr bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

[[nodiscard]] constexpr std::size_t next_power_of_two(std::size_t n) noexcept {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// values[j] = sum_k coeffs[k] exp(i k t_j); requires coeffs.size() <= N.
[[nodiscard]] std::vector<std::complex<double>> synthesize_complex(std::span<const std::complex<double>> coeffs,
                                                                   std::size_t N);

/// values[j] = Re sum_k coeffs[k] exp(i k t_j); requires coeffs.size() <= N/2.
[[nodiscard]] std::vector<double> synthesize_real(std::span<const std::complex<double>> coeffs, std::size_t N);

/// X_k = sum_j values[j] exp(-i k t_j) for k = 0..N/2.
[[nodiscard]] std::vector<std::complex<double>> analyze_real(std::span<const double> values);

/// Off-grid values of a band-limited periodic function from its samples on
/// t_j = 2 pi j / N by 16-point barycentric interpolation centred on t.
/// With N >= 16 * bandwidth the error is below rounding.
class PeriodicInterpolant {
public:
    explicit PeriodicInterpolant(std::vector<double> values);
    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] const std::vector<double>& values() const noexcept { return v_; }

private:
    std::vector<double> v_;
    double inv_h_;
};

/// Grid size used for interpolating a function of the given bandwidth.
[[nodiscard]] constexpr std::size_t interpolation_grid(std::size_t bandwidth) noexcept {
    return next_power_of_two(16 * (bandwidth + 1));
}

} // namespace lebesgue::fft
