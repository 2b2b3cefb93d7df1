#include "lebesgue/specfun.hpp"

#include "lebesgue/core.hpp"
#include "lebesgue/summation.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace lebesgue::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x) with exact reduction of the argument.
double sin_pi(double x) {
    double r = std::fmod(x, 2.0);
    if (r < 0.0) r += 2.0;
    if (r == 0.0 || r == 1.0) return 0.0;
    if (r > 1.0) return -std::sin(kPi * (r - 1.0));
    return std::sin(kPi * r);
}

// 1/Gamma(x) signed, zero at the poles.
struct ReciprocalGamma {
    double log_abs;  // -inf when the reciprocal is zero
    int sign;
};

ReciprocalGamma reciprocal_gamma(double x) {
    if (is_nonpositive_integer(x)) return {-std::numeric_limits<double>::infinity(), 0};
    const auto g = signed_log_gamma(x);
    return {-g.log_abs, g.sign};
}

// Partial-sum ladder of the 2F1 series at z = 1, summed at N = kLadderStart * 2^i.
constexpr long kLadderStart = 256;
constexpr int kLadderLevels = 11;  // last rung: 256 * 2^10 = 262144 terms

} // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
    if (std::isinf(x)) return x;
    // Lanczos approximation, g = 671/128, 14 coefficients.
    static constexpr std::array<double, 14> cof = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
        -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
        -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
        .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
        -.261908384015814087e-4, .368991826595316234e-5};
    double y = x;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (double c : cof) ser += c / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

SignedLogGamma signed_log_gamma(double x) {
    if (is_nonpositive_integer(x)) throw DomainError("signed_log_gamma: pole at non-positive integer");
    if (x > 0.0) return {log_gamma(x), 1};
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    const double s = sin_pi(x);
    return {std::log(kPi) - std::log(std::abs(s)) - log_gamma(1.0 - x), s > 0.0 ? 1 : -1};
}

Gauss2F1Routes gauss_2f1_unit_routes(const GaussArgs& args) {
    const auto [a, b, c] = args;
    if (is_nonpositive_integer(c)) throw DomainError("gauss_2f1_unit: c is zero or a negative integer");
    const double s = c - a - b;
    if (!(s > 0.0)) throw ConvergenceError("gauss_2f1_unit: series diverges at z = 1 (requires c - a - b > 0)");

    Gauss2F1Routes out{};

    {
        const auto gc = signed_log_gamma(c);
        const auto gs = signed_log_gamma(s);
        const auto ra = reciprocal_gamma(c - a);
        const auto rb = reciprocal_gamma(c - b);
        if (ra.sign == 0 || rb.sign == 0) {
            out.gamma_formula = 0.0;
        } else {
            out.gamma_formula = gc.sign * gs.sign * ra.sign * rb.sign *
                                std::exp(gc.log_abs + gs.log_abs + ra.log_abs + rb.log_abs);
        }
    }

    NeumaierSum sum;
    double term = 1.0;
    std::vector<double> ladder;
    ladder.reserve(kLadderLevels);
    long next_rung = kLadderStart;
    long k = 0;
    const long max_terms = kLadderStart << (kLadderLevels - 1);
    bool stopped = false;
    while (k < max_terms) {
        sum.add(term);
        ++k;
        if (term == 0.0 || (k > 8 && std::abs(term) < 1e-16 * std::abs(sum.value()))) {
            stopped = true;
            break;
        }
        const double kk = static_cast<double>(k - 1);
        term *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0));
        if (k == next_rung) {
            ladder.push_back(sum.value());
            next_rung *= 2;
        }
    }
    out.terms = k;
    if (stopped) {
        out.series = sum.value();
        out.extrapolated = false;
        return out;
    }

    // The remainder S - S_N has an asymptotic expansion in N^{-(s+m)},
    // m = 0, 1, 2, ...; eliminate one exponent per Richardson level along the
    // doubling ladder.
    std::vector<double> t = ladder;
    for (int m = 0; t.size() > 1; ++m) {
        const double f = std::pow(2.0, s + m);
        for (std::size_t i = 0; i + 1 < t.size(); ++i) t[i] = (f * t[i + 1] - t[i]) / (f - 1.0);
        t.pop_back();
    }
    out.series = t.front();
    out.extrapolated = true;
    return out;
}

double gauss_2f1_unit(const GaussArgs& args) {
    const auto routes = gauss_2f1_unit_routes(args);
    const double scale = std::max(std::abs(routes.gamma_formula), std::abs(routes.series));
    if (std::abs(routes.gamma_formula - routes.series) > 1e-10 * scale) {
        throw ConvergenceError("gauss_2f1_unit: Gauss formula and direct series disagree");
    }
    return routes.gamma_formula;
}

double cos_lp_norm(double q) {
    if (!(q >= 1.0)) throw DomainError("cos_lp_norm: q must be >= 1");
    if (std::isinf(q)) return 1.0;
    const double log_integral = std::log(2.0) + 0.5 * std::log(kPi) + log_gamma((q + 1.0) / 2.0) -
                                log_gamma(q / 2.0 + 1.0);
    return std::exp(log_integral / q);
}

double log_upper_incomplete_gamma(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) throw DomainError("log_upper_incomplete_gamma: need a > 0, x >= 0");
    const double lga = log_gamma(a);
    if (x == 0.0) return lga;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (x < a + 1.0) {
        // Lower regularized gamma P(a, x) by its series; Gamma(a, x) = Gamma(a) (1 - P).
        double ap = a;
        double del = 1.0 / a;
        double sum = del;
        for (int i = 0; i < 10000; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * eps) break;
        }
        const double log_p = std::log(sum) - x + a * std::log(x) - lga;
        return lga + std::log1p(-std::exp(log_p));
    }
    // Modified Lentz evaluation of the continued fraction for Gamma(a, x).
    constexpr double tiny = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= eps) return -x + a * std::log(x) + std::log(h);
    }
    throw ConvergenceError("log_upper_incomplete_gamma: continued fraction did not converge");
}

double log_exp_power_tail_bound(double alpha, double r, long long K) {
    if (!(alpha > 0.0)) throw DomainError("exp_power_tail_bound: alpha must be positive");
    if (!(r > 0.0 && r <= 1.0)) throw DomainError("exp_power_tail_bound: r must lie in (0, 1]");
    if (K < 2) throw DomainError("exp_power_tail_bound: K must be >= 2");
    // int_{K-1}^inf exp(-alpha t^r) dt = Gamma(1/r, alpha (K-1)^r) / (r alpha^{1/r}).
    const double a = 1.0 / r;
    const double x = alpha * std::pow(static_cast<double>(K - 1), r);
    return log_upper_incomplete_gamma(a, x) - std::log(r) - a * std::log(alpha);
}

double exp_power_tail_bound(double alpha, double r, long long K) {
    return std::exp(log_exp_power_tail_bound(alpha, r, K));
}

} // namespace lebesgue::specfun
