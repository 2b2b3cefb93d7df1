#include "lebesgue/extremal.hpp"
#include "lebesgue/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <set>

using namespace lebesgue;

namespace {

constexpr double pi = std::numbers::pi;

TrigPoly cosine(int m) {
    TrigPoly p = TrigPoly::zero(m);
    p.a[static_cast<std::size_t>(m)] = 1.0;
    return p;
}

bool same(const VerificationReport& x, const VerificationReport& y) {
    auto eq = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
    return x.case_id == y.case_id && x.n == y.n && x.p == y.p && x.n0 == y.n0 && eq(x.lhs.mantissa, y.lhs.mantissa) &&
           x.lhs.log_factor == y.lhs.log_factor && eq(x.e_n, y.e_n) && eq(x.implied_gamma, y.implied_gamma) &&
           x.pass == y.pass && x.notes == y.notes;
}

} // namespace

TEST_CASE("theorem checks of low-degree polynomials are trivial") {
    const KernelParams params{1.0, 0.5, 0.0};
    const auto r1 = verify_theorem1(params, 8, 1.5, cosine(5));
    CHECK(r1.lhs.mantissa == 0.0);
    CHECK(r1.e_n == 0.0);
    CHECK(r1.pass);
    const auto r2 = verify_theorem2(params, 8, cosine(7));
    CHECK(r2.lhs.mantissa == 0.0);
    CHECK(r2.pass);
    CHECK(r2.refined_band.has_value());
}

TEST_CASE("single harmonic at p = 2") {
    const KernelParams params{1.0, 0.5, 0.0};
    const long long n = 16;
    const auto r = verify_theorem1(params, n, 2.0, cosine(static_cast<int>(n)));
    CHECK(r.lhs.log_factor == doctest::Approx(-4.0));
    CHECK(r.lhs.mantissa == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.e_n == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
    CHECK(r.pass);
    CHECK(r.n0 > n);
    CHECK_FALSE(r.claim_applies);
}

TEST_CASE("random polynomials satisfy the Hoelder bound") {
    const KernelParams params{1.0, 0.5, 0.0};
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto phi = random_trig_poly(48, seed);
        for (double p : {1.5, 2.0}) {
            const auto r = verify_theorem1(params, 16, p, phi);
            INFO("seed " << seed << " p " << p << " notes " << r.notes);
            CHECK(r.pass);
            CHECK(r.notes.find("hoelder bound violated") == std::string::npos);
        }
        const auto r = verify_theorem2(params, 16, phi);
        INFO("notes " << r.notes);
        CHECK(r.pass);
    }
}

TEST_CASE("theorem2 for a sign function") {
    const KernelParams params{2.0, 0.5, 0.0};
    const long long n = 24;
    PiecewiseSmoothFunction f;
    f.evaluator = [](double t) { return std::cos(24.0 * t) >= 0.0 ? 1.0 : -1.0; };
    for (int k = 0; k < 48; ++k) f.breakpoints.push_back((pi / 2.0 + k * pi) / 24.0);
    f.bandwidth = n;
    const auto r = verify_theorem2(params, n, f);
    INFO(r.notes);
    // sign cos(nt) is orthogonal to all lower harmonics, so E_n = ||.||_1 = 2 pi.
    CHECK(r.e_n == doctest::Approx(2.0 * pi).epsilon(1e-9));
    const auto kernel = build_scaled_kernel(params, n);
    const auto sup = kernel_norm_numeric(kernel, std::numeric_limits<double>::infinity());
    CHECK(r.lhs.mantissa <= sup.mantissa * r.e_n * (1.0 + 1e-9));
    CHECK(r.pass);
}

TEST_CASE("sharpness identity through the report") {
    const KernelParams params{1.0, 0.5, 0.0};
    const auto r2 = verify_sharpness1(params, 32, 2.0, 1.0);
    INFO(r2.notes);
    const auto kernel = build_scaled_kernel(params, 32);
    CHECK(r2.lhs.mantissa == doctest::Approx(kernel_norm_numeric(kernel, 2.0).mantissa).epsilon(1e-8));

    const auto r15 = verify_sharpness1(KernelParams{1.0, 0.5, 0.3}, 8, 1.5, 1.0);
    INFO(r15.notes);
    CHECK(r15.notes.find("identity relative error") != std::string::npos);
    const auto k15 = build_scaled_kernel(KernelParams{1.0, 0.5, 0.3}, 8);
    CHECK(r15.lhs.mantissa == doctest::Approx(kernel_norm_numeric(k15, 3.0).mantissa).epsilon(1e-6));
}

TEST_CASE("two-level sharpness at n0 flags the vacuous lower bounds") {
    const KernelParams params{2.0, 0.5, 0.0};
    const auto r = verify_sharpness2(params, 784, 1.0);
    INFO(r.notes);
    CHECK(r.n0 == 784);
    CHECK(r.claim_applies);
    CHECK(r.notes.find("final lower bound vacuous") != std::string::npos);
    CHECK(r.notes.find("eps lower bound vacuous") != std::string::npos);
    CHECK(r.notes.find("hoelder bound violated") == std::string::npos);
    CHECK(std::abs(r.implied_gamma) <= ImpliedConstantBands::gamma_band);
    CHECK(r.pass);
}

TEST_CASE("kernel-norm gamma at the threshold") {
    const KernelParams params{2.0, 0.5, 0.0};
    const auto r = verify_gamma(params, 784, 1.0);
    CHECK(r.claim_applies);
    CHECK(r.pass);
    CHECK(r.main_term.mantissa == doctest::Approx(28.0 / pi).epsilon(1e-12));
    CHECK(std::abs(r.implied_gamma) <= ImpliedConstantBands::refined_gamma1_band);
    CHECK(r.notes == "within refined band");
}

TEST_CASE("class bound") {
    const KernelParams params{2.0, 0.5, 0.0};
    const auto b = class_bound(params, 784, 1.0);
    // 28 (1/pi + (14 pi)^2 (1/28 + 1/28)).
    CHECK(b.mantissa == doctest::Approx(28.0 * (1.0 / pi + ImpliedConstantBands::gamma_band * (2.0 / 28.0))));
    CHECK(b.log_factor == doctest::Approx(-56.0));

    const KernelParams q{1.0, 0.5, 0.5};
    for (double p : {1.5, 3.0}) {
        const auto phi = build_phi(q, 8, p, 1.0);
        const auto value = sharpness_value(phi, build_scaled_kernel(q, 8));
        CHECK(value <= class_bound(q, 8, p));
    }
}

TEST_CASE("counter-based generator") {
    const CounterRng a(42), b(42), c(43);
    CHECK(a.bits(7) == b.bits(7));
    CHECK(a.bits(7) != c.bits(7));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const double u = a.symmetric(i);
        CHECK(u >= -1.0);
        CHECK(u < 1.0);
        seen.insert(a.bits(i));
    }
    CHECK(seen.size() == 1000);
    const auto p = random_trig_poly(4, 9);
    CHECK(p.a[0] == CounterRng(9).symmetric(0));
    CHECK(p.b[4] == CounterRng(9).symmetric(8));
}

TEST_CASE("sweep keeps input order and is independent of the thread count") {
    CHECK(sweep({}).empty());
    const KernelParams params{1.0, 0.5, 0.25};
    std::vector<SweepCase> cases = {
        {"c", CheckKind::gamma, params, 1.5, 12, 1.0, 0},
        {"a", CheckKind::theorem1, params, 1.5, 6, 2.0, 5},
        {"b", CheckKind::theorem2, params, 1.0, 6, 1.0, 6},
        {"d", CheckKind::sharpness1, params, 3.0, 6, 1.0, 0},
        {"e", CheckKind::gamma, KernelParams{-1.0, 0.5, 0.0}, 2.0, 6, 1.0, 0},
    };
    SweepOptions one;
    SweepOptions four;
    four.threads = 4;
    const auto x = sweep(cases, one);
    const auto y = sweep(cases, four);
    REQUIRE(x.size() == cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) {
        CHECK(x[i].case_id == cases[i].case_id);
        CHECK(same(x[i], y[i]));
        CHECK(x[i].wall_time_ms == 0);
    }
    CHECK_FALSE(x[4].pass);
    CHECK(x[4].notes.rfind("error: ", 0) == 0);
}

TEST_CASE("parse_check") {
    CHECK(parse_check("sharpness2") == CheckKind::sharpness2);
    CHECK(to_string(CheckKind::theorem1) == "theorem1");
    CHECK_THROWS_AS((void)parse_check("theorem3"), DomainError);
}
