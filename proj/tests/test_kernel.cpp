#include "lebesgue/core.hpp"
#include "lebesgue/kernel.hpp"
#include "lebesgue/specfun.hpp"

#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace lebesgue;

namespace {

constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Independent cosine summation of the scaled tail kernel.
double direct_q(const KernelParams& p, long long n, long long K, double t) {
    double s = 0.0;
    for (long long k = n; k <= K; ++k) {
        const double c = std::exp(-p.alpha * (std::pow(static_cast<double>(k), p.r) - std::pow(static_cast<double>(n), p.r)));
        s += c * std::cos(static_cast<double>(k) * t - p.beta * pi / 2.0);
    }
    return s;
}

} // namespace

TEST_CASE("truncation_index agrees with a scan of the tail bound") {
    const KernelParams p{2.0, 0.5, 0.0};
    const long long K = truncation_index(p, 784, 1e-18);
    long long scan = 784;
    while (log_scaled_tail_bound(p, 784, scan) >= std::log(1e-18)) ++scan;
    CHECK(K == scan);
    CHECK(K > 1900);
    // sqrt(K) - sqrt(n) is about 22.7, so K - n = 2 * 22.7 * 28 + 22.7^2.
    CHECK(K < 2700);

    // The neglected tail, summed directly, is below the tolerance.
    double tail = 0.0;
    for (long long k = K + 1; k < K + 200000; ++k) tail += std::exp(-2.0 * (std::sqrt(static_cast<double>(k)) - 28.0));
    CHECK(tail < 1e-18);

    const KernelParams q{1.0, 0.99, 0.0};
    const long long K2 = truncation_index(q, 10, 1e-18);
    long long scan2 = 10;
    while (log_scaled_tail_bound(q, 10, scan2) >= std::log(1e-18)) ++scan2;
    CHECK(K2 == scan2);

    CHECK(truncation_index(p, 50, 1.0) == 50);
    CHECK(truncation_index(p, 50, 3.0) == 50);
    CHECK_THROWS_AS((void)truncation_index({1e-4, 0.5, 0.0}, 10, 1e-18, 1000), ResolutionError);
    CHECK_THROWS_AS((void)truncation_index(p, 0, 1e-18), DomainError);
}

TEST_CASE("kernel coefficients and pointwise values") {
    const auto k = build_scaled_kernel({1.0, 0.5, 0.3}, 16);
    const auto& c = k.coefficients();
    CHECK(c.front() == 1.0);
    for (std::size_t j = 1; j < c.size(); ++j) CHECK(c[j] < c[j - 1]);
    CHECK(k.tail_bound() < 1e-18);
    for (double t : {0.0, 0.4, 1.7, 3.1, 5.9, -2.0, 40.0}) {
        CHECK(std::abs(k(t) - direct_q(k.params(), 16, k.K(), t)) < 1e-12);
    }
}

TEST_CASE("single dominant term at large alpha") {
    const auto k = build_scaled_kernel({50.0, 0.5, 0.0}, 1);
    for (double t : {0.0, 0.5, 2.0, 4.0}) CHECK(std::abs(k(t) - std::cos(t)) < 1.1e-9);
    const auto sup = kernel_norm_numeric(k, std::numeric_limits<double>::infinity());
    CHECK(rel(sup.mantissa, 1.0 / pi) < 1e-8);
    CHECK(sup.log_factor == -50.0);
}

TEST_CASE("reflection symmetry and phase") {
    const auto k = build_scaled_kernel({1.0, 0.5, 0.7}, 12);
    const auto m = k.reflected();
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double t = u(gen);
        CHECK(std::abs(k(t) - m(-t)) < 1e-14 * std::max(1.0, std::abs(k(t))) * 10.0);
    }
    CHECK(std::abs(build_scaled_kernel({1.0, 0.5, 1.0}, 4)(0.0)) < 1e-15);
}

TEST_CASE("grid synthesis matches direct summation, with and without folding") {
    const auto k = build_scaled_kernel({1.0, 0.5, 0.4}, 9);
    for (std::size_t N : {std::size_t{16}, std::size_t{64}, k.default_grid()}) {
        const double shift = 0.123;
        const auto v = k.sample(N, shift);
        for (std::size_t j = 0; j < N; j += 1 + N / 50) {
            const double t = shift + 2.0 * pi * static_cast<double>(j) / static_cast<double>(N);
            CHECK(std::abs(v[j] - k(t)) < 1e-12);
        }
    }
}

TEST_CASE("Parseval and quadrature norms agree") {
    const auto k = build_scaled_kernel({1.3, 0.4, 0.6}, 21);
    const auto a = kernel_norm_numeric(k, 2.0, NormMethod::parseval);
    const auto b = kernel_norm_numeric(k, 2.0, NormMethod::quadrature);
    CHECK(rel(a.mantissa, b.mantissa) < 1e-10);
    double s = 0.0;
    for (double c : k.coefficients()) s += c * c;
    CHECK(rel(a.mantissa * a.mantissa * pi, s) < 1e-13);
    CHECK_THROWS_AS((void)kernel_norm_numeric(k, 3.0, NormMethod::parseval), DomainError);
}

TEST_CASE("q = 4 norm against a brute-force Riemann sum") {
    const auto k = build_scaled_kernel({1.0, 0.5, 0.0}, 8);
    const std::size_t N = std::size_t{1} << 20;
    const auto v = k.sample(N);
    double s = 0.0;
    for (double x : v) s += std::pow(x, 4);
    const double ref = std::pow(2.0 * pi * s / static_cast<double>(N), 0.25) / pi;
    CHECK(rel(kernel_norm_numeric(k, 4.0).mantissa, ref) < 1e-6);
}

TEST_CASE("non-even q norms against tanh-sinh between independently located zeros") {
    const KernelParams p{1.0, 0.5, 0.3};
    const auto k = build_scaled_kernel(p, 8);
    auto q_of = [&](double t) { return direct_q(p, 8, k.K(), t); };
    std::vector<double> zeros;
    const int M = 4096;
    for (int j = 0; j < M; ++j) {
        const double a = 2.0 * pi * j / M;
        const double b = 2.0 * pi * (j + 1) / M;
        if ((q_of(a) > 0.0) != (q_of(b) > 0.0)) {
            boost::uintmax_t iters = 200;
            const auto root = boost::math::tools::toms748_solve(q_of, a, b, boost::math::tools::eps_tolerance<double>(52), iters);
            zeros.push_back(0.5 * (root.first + root.second));
        }
    }
    REQUIRE(zeros.size() >= 2);
    boost::math::quadrature::tanh_sinh<double> ts;
    for (double q : {1.5, 3.0}) {
        double integral = 0.0;
        for (std::size_t i = 0; i < zeros.size(); ++i) {
            const double a = zeros[i];
            const double b = i + 1 < zeros.size() ? zeros[i + 1] : zeros[0] + 2.0 * pi;
            integral += ts.integrate([&](double t) { return std::pow(std::abs(q_of(t)), q); }, a, b);
        }
        const double ref = std::pow(integral, 1.0 / q) / pi;
        INFO("q = " << q);
        CHECK(rel(kernel_norm_numeric(k, q).mantissa, ref) < 1e-8);
    }
}

TEST_CASE("doubling the truncation index leaves the norm unchanged") {
    const KernelParams p{1.0, 0.5, 0.2};
    const auto k1 = build_scaled_kernel(p, 20);
    const auto k2 = build_scaled_kernel_at(p, 20, 2 * k1.K());
    for (double q : {2.0, 3.0, std::numeric_limits<double>::infinity()}) {
        CHECK(rel(kernel_norm_numeric(k1, q).mantissa, kernel_norm_numeric(k2, q).mantissa) < 1e-10);
    }
}

TEST_CASE("the tail kernel annihilates polynomials of degree below n") {
    const int n = 10;
    const auto k = build_scaled_kernel({1.0, 0.5, 0.5}, n);
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> a(n);
    std::vector<double> b(n);
    for (int j = 0; j < n; ++j) {
        a[static_cast<std::size_t>(j)] = u(gen);
        b[static_cast<std::size_t>(j)] = u(gen);
    }
    auto poly = [&](double t) {
        double s = a[0] / 2.0;
        for (int j = 1; j < n; ++j) s += a[static_cast<std::size_t>(j)] * std::cos(j * t) + b[static_cast<std::size_t>(j)] * std::sin(j * t);
        return s;
    };
    // A fixed panel rule that is exact for the product's bandwidth.
    const auto rule = norms::periodic_rule({}, k.K() + n, 1);
    for (double x : {0.0, 1.1, 4.2}) {
        double s = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double v = rule.weights[i] * poly(rule.nodes[i]) * k(x - rule.nodes[i]);
            s += v;
            scale += std::abs(v);
        }
        CHECK(std::abs(s) / pi < 1e-13 * scale);
    }
}

TEST_CASE("asymptotic main terms") {
    const KernelParams p{2.0, 0.5, 0.0};
    for (long long n : {16LL, 784LL, 10000LL}) {
        const auto a2 = kernel_norm_asymptotic(p, n, 2.0);
        CHECK(rel(a2.main.mantissa, std::pow(static_cast<double>(n), 0.25) / std::sqrt(2.0 * pi)) < 1e-12);
        CHECK(a2.main.log_factor == doctest::Approx(-2.0 * std::sqrt(static_cast<double>(n))));
    }
    CHECK(rel(kernel_norm_asymptotic(p, 784, 1.0).main.mantissa, 28.0 / pi) < 1e-14);
    CHECK(kernel_norm_asymptotic(p, 784, 1.0).main.mantissa == doctest::Approx(8.9127).epsilon(1e-4));

    const double F = 2.62206;
    const auto a3 = kernel_norm_asymptotic(p, 100, 3.0);
    const double expected =
        std::pow(100.0, 0.5 / 3.0) * specfun::cos_lp_norm(1.5) * std::pow(F, 2.0 / 3.0) / std::pow(pi, 1.0 + 2.0 / 3.0);
    CHECK(rel(a3.main.mantissa, expected) < 1e-5);
    CHECK_THROWS_AS((void)kernel_norm_asymptotic(p, 10, 0.5), DomainError);
}

TEST_CASE("n0 examples") {
    CHECK(n0(2.0, 0.5, 1.0) == 784);
    CHECK(n0(1.0, 0.5, 1.0) == 1225);

    // 3/sqrt(n) <= 1/(54 pi^3), scanned near the analytic crossing.
    const double crossing = std::pow(162.0 * std::pow(pi, 3.0), 2.0);
    long long scan = static_cast<long long>(crossing) - 50;
    while (3.0 / std::sqrt(static_cast<double>(scan)) > 1.0 / (54.0 * std::pow(pi, 3.0))) ++scan;
    CHECK(n0(2.0, 0.5, 2.0) == scan);
    CHECK(scan > 25000000);
    CHECK(scan < 25400000);

    CHECK_THROWS_AS((void)n0(1.0, 0.999, 2.0), OverflowError);
    CHECK_THROWS_AS((void)n0(1.0, 0.5, 0.5), DomainError);
}

TEST_CASE("n0 monotonicity") {
    long long prev = 0;
    for (double thr : {0.5, 0.2, 0.1, 0.05, 0.01, 1e-3}) {
        const long long v = n0_for_threshold(2.0, 0.5, 1.5, thr);
        CHECK(v >= prev);
        prev = v;
    }
    prev = 0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 8.0}) {
        const long long v = n0_for_threshold(2.0, 0.5, p, 1.0 / 14.0);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("implied gamma") {
    const KernelParams p{2.0, 0.5, 0.0};
    const auto asym = kernel_norm_asymptotic(p, 784, 1.0);
    CHECK(extract_gamma(p, 784, 1.0, asym.main) == 0.0);

    const auto k = build_scaled_kernel(p, 784);
    const double g1 = extract_gamma(p, 784, 1.0, kernel_norm_numeric(k, std::numeric_limits<double>::infinity()));
    CHECK(std::abs(g1) <= ImpliedConstantBands::gamma_band);
    const double g2 = extract_gamma(p, 784, 2.0, kernel_norm_numeric(k, 2.0));
    CHECK(std::isfinite(g2));
}

TEST_CASE("one-sided diagnostics") {
    const auto big = one_sided_diagnostics({50.0, 0.5, 0.0}, 1);
    CHECK(rel(big.sup_norm.mantissa, 1.0) < 1e-8);
    CHECK(big.m_n < 1e-8);

    const auto d = one_sided_diagnostics({2.0, 0.5, 0.0}, 784);
    // n^{1-r}/(alpha r) + alpha r n^r = 28 + 28 at this point.
    CHECK(d.m_n_bound == doctest::Approx(784.0 * pi * pi / 117.0 * 56.0));
    CHECK(d.m_n > 0.0);
    CHECK(d.m_n <= d.m_n_bound);
    CHECK(std::abs(d.theta) <= ImpliedConstantBands::theta_band);
    CHECK(std::abs(d.delta1) <= ImpliedConstantBands::delta1_band);

    // m_n against a dense direct scan of |S'|/|S|.
    const auto k = build_scaled_kernel({2.0, 0.5, 0.0}, 784);
    double scan = 0.0;
    for (int j = 0; j < 20000; ++j) {
        const double t = 2.0 * pi * j / 20000.0;
        std::complex<double> s = 0.0;
        std::complex<double> ds = 0.0;
        for (std::size_t i = 0; i < k.coefficients().size(); ++i) {
            const auto e = std::polar(k.coefficients()[i], static_cast<double>(i) * t);
            s += e;
            ds += static_cast<double>(i) * e;
        }
        scan = std::max(scan, std::abs(ds) / std::abs(s));
    }
    CHECK(d.m_n >= scan * (1.0 - 1e-12));
    CHECK(d.m_n <= scan * 1.01);
}
