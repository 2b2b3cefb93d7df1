#include "lebesgue/bestapprox.hpp"
#include "lebesgue/core.hpp"
#include "lebesgue/specfun.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace lebesgue;

namespace {

constexpr double pi = std::numbers::pi;

TrigPoly random_poly(int degree, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TrigPoly p = TrigPoly::zero(degree);
    for (int k = 0; k <= degree; ++k) {
        p.a[static_cast<std::size_t>(k)] = u(gen);
        if (k > 0) p.b[static_cast<std::size_t>(k)] = u(gen);
    }
    return p;
}

TrigPoly cosine(int m) {
    TrigPoly p = TrigPoly::zero(m);
    p.a[static_cast<std::size_t>(m)] = 1.0;
    return p;
}

double plain_eval(const TrigPoly& p, double t) {
    double s = p.a[0] / 2.0;
    for (int k = 1; k <= p.max_degree(); ++k) {
        s += p.a[static_cast<std::size_t>(k)] * std::cos(k * t) + p.b[static_cast<std::size_t>(k)] * std::sin(k * t);
    }
    return s;
}

// Midpoint sum of |phi - t|^p on a fine grid.
double riemann_lp(const TrigPoly& phi, const TrigPoly& t, double p, int N = 1 << 16) {
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
        const double x = 2.0 * pi * (j + 0.5) / N;
        s += std::pow(std::abs(plain_eval(phi, x) - plain_eval(t, x)), p);
    }
    return std::pow(s * 2.0 * pi / N, 1.0 / p);
}

double max_coeff_diff(const TrigPoly& x, const TrigPoly& y) {
    double m = 0.0;
    const auto size = std::max(x.a.size(), y.a.size());
    for (std::size_t k = 0; k < size; ++k) {
        const double xa = k < x.a.size() ? x.a[k] : 0.0;
        const double ya = k < y.a.size() ? y.a[k] : 0.0;
        const double xb = k < x.b.size() ? x.b[k] : 0.0;
        const double yb = k < y.b.size() ? y.b[k] : 0.0;
        m = std::max({m, std::abs(xa - ya), std::abs(xb - yb)});
    }
    return m;
}

} // namespace

TEST_CASE("polynomials of degree below n are their own best approximation") {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        const auto r = best_approx(cosine(3), 5, p);
        INFO("p = " << p);
        CHECK(r.converged);
        CHECK(r.e_value == 0.0);
        CHECK(max_coeff_diff(r.minimizer, cosine(3)) < 1e-15);
    }
}

TEST_CASE("single harmonic at or above n: zero is optimal") {
    for (int m : {5, 7}) {
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            const auto r = best_approx(cosine(m), 5, p);
            INFO("m = " << m << " p = " << p);
            CHECK(r.converged);
            CHECK(r.certificate_residual <= 1e-8);
            CHECK(std::abs(r.e_value - specfun::cos_lp_norm(p)) <= 1e-9 * specfun::cos_lp_norm(p));
            CHECK(max_coeff_diff(r.minimizer, TrigPoly{}) < 1e-8);
        }
    }
}

TEST_CASE("p = 2 matches the Parseval tail, by truncation and by descent") {
    const auto phi = random_poly(12, 7);
    double tail = 0.0;
    for (int k = 5; k <= 12; ++k) tail += phi.a[static_cast<std::size_t>(k)] * phi.a[static_cast<std::size_t>(k)] +
                                         phi.b[static_cast<std::size_t>(k)] * phi.b[static_cast<std::size_t>(k)];
    const double expected = std::sqrt(pi * tail);

    const auto closed = best_approx(phi, 5, 2.0);
    CHECK(std::abs(closed.e_value - expected) <= 1e-12 * expected);
    CHECK(closed.certificate_residual < 1e-12);

    ApproxOptions opts;
    opts.force_descent = true;
    opts.initial = TrigPoly{};
    const auto descent = best_approx(phi, 5, 2.0, opts);
    CHECK(descent.converged);
    CHECK(std::abs(descent.e_value - expected) <= 1e-10 * expected);
    CHECK(max_coeff_diff(descent.minimizer, closed.minimizer) < 1e-10);
}

TEST_CASE("certificate of a pure high harmonic vanishes") {
    CHECK(orthogonality_certificate(cosine(6), 6, 2.0) < 1e-12);
    CHECK(orthogonality_certificate(cosine(6).as_function(), 6, 1.5) < 1e-10);
    CHECK(orthogonality_certificate(cosine(6).as_function(), 6, 1.0) < 1e-12);
    // A low harmonic is detected.
    CHECK(orthogonality_certificate(cosine(2), 6, 2.0) > 0.1);
    CHECK(orthogonality_certificate(cosine(2).as_function(), 6, 1.0) > 0.1);
}

TEST_CASE("random polynomials: certificate, optimality and the trivial bound") {
    const auto phi = random_poly(18, 11);
    for (double p : {1.0, 1.5, 3.0}) {
        const auto r = best_approx(phi, 6, p);
        INFO("p = " << p);
        CHECK(r.converged);
        CHECK(r.certificate_residual <= 1e-8);
        CHECK(std::abs(r.e_value - riemann_lp(phi, r.minimizer, p)) <= 1e-7 * r.e_value);
        CHECK(r.e_value <= riemann_lp(phi, TrigPoly{}, p));

        // Perturbing the minimizer never lowers the norm.
        std::mt19937_64 gen(3);
        std::normal_distribution<double> g(0.0, 1e-3);
        for (int trial = 0; trial < 4; ++trial) {
            TrigPoly t = r.minimizer;
            for (std::size_t k = 0; k < t.a.size(); ++k) {
                t.a[k] += g(gen);
                if (k > 0) t.b[k] += g(gen);
            }
            CHECK(riemann_lp(phi, t, p) >= riemann_lp(phi, r.minimizer, p));
        }
    }
}

TEST_CASE("E_n is nonincreasing in n") {
    const auto phi = random_poly(14, 5);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        double prev = std::numeric_limits<double>::infinity();
        for (long long n = 1; n <= 15; n += 2) {
            const auto r = best_approx(phi, n, p);
            INFO("p = " << p << " n = " << n);
            CHECK(r.converged);
            CHECK(r.e_value <= prev * (1.0 + 1e-10));
            prev = r.e_value;
        }
        CHECK(prev == 0.0);
    }
}

TEST_CASE("translation by a low-degree polynomial leaves E_n unchanged") {
    const auto phi = random_poly(15, 21);
    const auto shift = random_poly(4, 22);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        const auto a = best_approx(phi, 5, p);
        const auto b = best_approx(phi + shift, 5, p);
        INFO("p = " << p);
        CHECK(std::abs(a.e_value - b.e_value) <= 1e-8 * a.e_value);
        CHECK(max_coeff_diff(b.minimizer, a.minimizer + shift) < 1e-6);
    }
}

TEST_CASE("the minimizer does not depend on the starting point") {
    const auto phi = random_poly(15, 31);
    for (double p : {1.5, 3.0}) {
        ApproxOptions from_zero;
        from_zero.initial = TrigPoly{};
        ApproxOptions from_random;
        from_random.initial = 3.0 * random_poly(4, 32);
        const auto a = best_approx(phi, 5, p, from_zero);
        const auto b = best_approx(phi, 5, p, from_random);
        INFO("p = " << p);
        CHECK(a.converged);
        CHECK(b.converged);
        CHECK(max_coeff_diff(a.minimizer, b.minimizer) < 1e-6);
    }
}

TEST_CASE("piecewise-smooth input: triangle wave") {
    // |t - pi| = pi/2 + (4/pi) sum_{k odd} cos(kt)/k^2 on [0, 2 pi).
    PiecewiseSmoothFunction tri;
    tri.evaluator = [](double t) {
        double r = std::fmod(t, 2.0 * pi);
        if (r < 0.0) r += 2.0 * pi;
        return std::abs(r - pi);
    };
    tri.breakpoints = {0.0, pi};
    tri.bandwidth = 8;

    const long long n = 4;
    double tail = 0.0;
    for (long long k = 5; k < 2000001; k += 2) tail += 16.0 / (pi * pi * std::pow(static_cast<double>(k), 4));
    const double expected = std::sqrt(pi * tail);
    const auto r2 = best_approx(tri, n, 2.0);
    CHECK(std::abs(r2.e_value - expected) <= 1e-9 * expected);
    CHECK(r2.certificate_residual < 1e-9);
    CHECK(std::abs(r2.minimizer.a[1] - 4.0 / pi) < 1e-10);
    CHECK(std::abs(r2.minimizer.a[3] - 4.0 / (9.0 * pi)) < 1e-10);

    for (double p : {1.0, 1.5}) {
        const auto r = best_approx(tri, n, p);
        INFO("p = " << p);
        CHECK(r.converged);
        CHECK(r.certificate_residual <= 1e-8);
        CHECK(r.e_value <= norms::lp_norm(tri, p) + 1e-12);
    }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS((void)best_approx(cosine(2), 0, 2.0), DomainError);
    CHECK_THROWS_AS((void)best_approx(cosine(2), 3, 0.5), DomainError);
    CHECK_THROWS_AS((void)best_approx(cosine(2), 3, std::numeric_limits<double>::infinity()), DomainError);
}
