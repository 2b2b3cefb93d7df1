#include "lebesgue/core.hpp"
#include "lebesgue/specfun.hpp"

#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

using namespace lebesgue;
using namespace lebesgue::specfun;

namespace {

constexpr double pi = std::numbers::pi;

// int_0^inf (1+t^2)^{-p'/2} dt, computed as int_0^{pi/2} sin(u)^{p'-2} du.
double hypergeom_integral_oracle(double pprime) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate([pprime](double u) { return std::pow(std::sin(u), pprime - 2.0); }, 0.0, pi / 2.0);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

TEST_CASE("log_gamma matches reference values") {
    CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(log_gamma(1.0)) < 1e-14);
    CHECK(std::abs(log_gamma(2.0)) < 1e-14);
    CHECK(rel(log_gamma(5.0), std::log(24.0)) < 1e-14);

    // Gamma(1/2) = 2 int_0^inf exp(-u^2) du by quadrature.
    boost::math::quadrature::exp_sinh<double> es;
    const double gamma_half = 2.0 * es.integrate([](double u) { return std::exp(-u * u); });
    CHECK(rel(log_gamma(0.5), std::log(gamma_half)) < 1e-13);
    CHECK(log_gamma(0.5) == doctest::Approx(0.5723649).epsilon(1e-7));
}

TEST_CASE("log_gamma relative accuracy over [1e-3, 1e6]") {
    for (double lx = -3.0; lx <= 6.0; lx += 0.0137) {
        const double x = std::pow(10.0, lx);
        const double ref = boost::math::lgamma(x);
        INFO("x = " << x);
        CHECK(std::abs(log_gamma(x) - ref) <= 1e-13 * std::max(std::abs(ref), 1.0));
    }
}

TEST_CASE("log_gamma rejects non-positive arguments") {
    CHECK_THROWS_AS((void)log_gamma(0.0), DomainError);
    CHECK_THROWS_AS((void)log_gamma(-1.5), DomainError);
}

TEST_CASE("signed_log_gamma uses reflection for negative arguments") {
    for (double x : {-0.5, -1.25, -2.7, -7.5}) {
        const auto g = signed_log_gamma(x);
        const double ref = boost::math::tgamma(x);
        CHECK(g.sign == (ref > 0 ? 1 : -1));
        CHECK(rel(std::exp(g.log_abs), std::abs(ref)) < 1e-12);
    }
    CHECK_THROWS_AS((void)signed_log_gamma(-3.0), DomainError);
}

TEST_CASE("gauss_2f1_unit examples") {
    CHECK(gauss_2f1_unit({0.7, 0.0, 2.3}) == doctest::Approx(1.0).epsilon(1e-15));

    const double f1 = gauss_2f1_unit({0.5, 0.5, 1.5});
    CHECK(rel(f1, hypergeom_integral_oracle(2.0)) < 1e-12);
    CHECK(rel(f1, pi / 2.0) < 1e-12);

    const double f2 = gauss_2f1_unit({0.5, 0.75, 1.5});
    CHECK(rel(f2, hypergeom_integral_oracle(1.5)) < 1e-10);
    CHECK(f2 == doctest::Approx(2.62206).epsilon(1e-5));
}

TEST_CASE("gauss_2f1_unit: both routes agree over a parameter grid") {
    for (double a : {0.25, 0.5, 1.0, 1.7}) {
        for (double b : {0.1, 0.5, 1.3}) {
            for (double s : {0.1, 0.25, 0.5, 1.0, 2.0, 3.0}) {
                const double c = a + b + s;
                const auto routes = gauss_2f1_unit_routes({a, b, c});
                INFO("a=" << a << " b=" << b << " c=" << c);
                CHECK(rel(routes.series, routes.gamma_formula) < 1e-10);
            }
        }
    }
}

TEST_CASE("gauss_2f1_unit: short series stops by the term criterion") {
    const auto routes = gauss_2f1_unit_routes({0.5, 0.5, 4.0});
    CHECK_FALSE(routes.extrapolated);
    // The term-size stopping rule leaves a tail of roughly k * term / (c - a - b).
    CHECK(rel(routes.series, routes.gamma_formula) < 1e-11);
}

TEST_CASE("gauss_2f1_unit: negative b from the p' > 3 hypergeometric factor") {
    for (double pprime : {3.5, 4.0, 6.0}) {
        const double f = gauss_2f1_unit({0.5, (3.0 - pprime) / 2.0, 1.5});
        CHECK(rel(f, hypergeom_integral_oracle(pprime)) < 1e-10);
    }
}

TEST_CASE("gauss_2f1_unit error paths") {
    CHECK_THROWS_AS((void)gauss_2f1_unit({0.5, 0.5, 1.0}), ConvergenceError);
    CHECK_THROWS_AS((void)gauss_2f1_unit({0.5, 0.5, 0.9}), ConvergenceError);
    CHECK_THROWS_AS((void)gauss_2f1_unit({0.5, 0.5, -2.0}), DomainError);
}

TEST_CASE("cos_lp_norm examples and quadrature oracle") {
    CHECK(cos_lp_norm(1.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(rel(cos_lp_norm(2.0), std::sqrt(pi)) < 1e-14);
    CHECK(rel(cos_lp_norm(4.0), std::pow(3.0 * pi / 4.0, 0.25)) < 1e-14);

    using boost::math::quadrature::gauss_kronrod;
    for (double q : {1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 7.5}) {
        boost::math::quadrature::tanh_sinh<double> ts;
        const double quarter = ts.integrate([q](double t) { return std::pow(std::cos(t), q); }, 0.0, pi / 2.0);
        CHECK(rel(cos_lp_norm(q), std::pow(4.0 * quarter, 1.0 / q)) < 1e-12);
    }
    // The norm tends to 1 from below for large q (mpmath reference values).
    CHECK(rel(cos_lp_norm(16.0), 1.0132226865437889) < 1e-13);
    CHECK(rel(cos_lp_norm(64.0), 0.99266357642238484) < 1e-13);
    CHECK(cos_lp_norm(64.0) < cos_lp_norm(256.0));
    CHECK(cos_lp_norm(256.0) < 1.0);
    CHECK_THROWS_AS((void)cos_lp_norm(0.5), DomainError);
}

TEST_CASE("upper incomplete gamma against Boost") {
    for (double a : {0.5, 1.0, 2.0, 5.0, 1.0 / 0.3}) {
        for (double x : {0.01, 0.5, 1.0, 3.0, 10.0, 44.0, 300.0}) {
            const double ref = std::log(boost::math::tgamma(a, x));
            INFO("a=" << a << " x=" << x);
            CHECK(std::abs(log_upper_incomplete_gamma(a, x) - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("exp_power_tail_bound examples") {
    const double geo = exp_power_tail_bound(1.0, 1.0, 10);
    CHECK(geo >= std::exp(-10.0) / (1.0 - std::exp(-1.0)));
    CHECK(geo <= std::exp(-9.0) * (1.0 + 1e-14));

    double direct = 0.0;
    for (long k = 1000000; k >= 100; --k) direct += std::exp(-std::sqrt(static_cast<double>(k)));
    CHECK(exp_power_tail_bound(1.0, 0.5, 100) >= direct);

    // Smallest K with bound < 1e-18 for alpha = 2, r = 1/2, by scanning.
    long long K = 2;
    while (exp_power_tail_bound(2.0, 0.5, K) >= 1e-18) ++K;
    const double root = std::sqrt(static_cast<double>(K - 1));
    CHECK(root > 21.0);
    CHECK(root < 23.0);

    CHECK_THROWS_AS((void)exp_power_tail_bound(1.0, 0.5, 1), DomainError);
    CHECK_THROWS_AS((void)exp_power_tail_bound(-1.0, 0.5, 5), DomainError);
    CHECK_THROWS_AS((void)exp_power_tail_bound(1.0, 1.5, 5), DomainError);
}

TEST_CASE("exp_power_tail_bound dominates every finite partial tail") {
    for (double alpha : {0.5, 1.0, 3.0}) {
        for (double r : {0.2, 0.5, 0.8, 1.0}) {
            for (long long K : {2LL, 5LL, 40LL, 300LL}) {
                const double bound = exp_power_tail_bound(alpha, r, K);
                double partial = 0.0;
                for (long long k = K; k < K + 200000; ++k) {
                    const double term = std::exp(-alpha * std::pow(static_cast<double>(k), r));
                    partial += term;
                    if (term < 1e-300) break;
                }
                INFO("alpha=" << alpha << " r=" << r << " K=" << K);
                CHECK(bound >= partial);
            }
        }
    }
}

TEST_CASE("log form of the tail bound stays finite where the value underflows") {
    const double lb = log_exp_power_tail_bound(2.0, 0.5, 400000000LL);
    CHECK(std::isfinite(lb));
    CHECK(lb < -700.0);
}
