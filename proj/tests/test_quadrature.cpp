#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace dq;

namespace {

// Independent oracle for the integral of e^{s^2} over [0,x]: termwise
// integration of the exponential series gives sum x^(2n+1)/(n!(2n+1)).
double exp_sq_integral_oracle(double x, int terms = 30) {
    double sum = 0.0, factorial = 1.0;
    double xpow = x;
    for (int n = 0; n < terms; ++n) {
        if (n > 0) factorial *= n;
        sum += xpow / (factorial * (2 * n + 1));
        xpow *= x * x;
    }
    return sum;
}

constexpr double kExpSqIntegral01 = 1.4626517459071816; // 30-term oracle value

} // namespace

TEST_CASE("the oracle itself is frozen correctly") {
    CHECK(std::abs(exp_sq_integral_oracle(1.0) - kExpSqIntegral01) < 1e-15);
    CHECK(std::abs(exp_sq_integral_oracle(1.0, 60) - exp_sq_integral_oracle(1.0, 30)) < 1e-16);
}

TEST_CASE("linear diagonal trace integrates exactly enough") {
    const auto H = [](const Scalar& a, const Scalar& b) { return a + b; }; // h(s) = 2s
    const auto [value, err] =
        integrate_diagonal(H, Scalar::real(0.0), Scalar::real(1.0), QuadratureConfig{});
    CHECK(std::abs(value.value() - 1.0) <= 1e-10);
    CHECK(err <= 1e-10);
}

TEST_CASE("exp(s^2) matches the series oracle") {
    const auto H = [](const Scalar& a, const Scalar& b) {
        (void)b;
        return Scalar::real(std::exp(a.value() * a.value()));
    };
    const auto [value, err] =
        integrate_diagonal(H, Scalar::real(0.0), Scalar::real(1.0), QuadratureConfig{});
    CHECK(std::abs(value.value() - kExpSqIntegral01) <= 1e-10);
    CHECK(err <= 1e-10);
}

TEST_CASE("empty interval is exactly zero") {
    const auto H = [](const Scalar& a, const Scalar&) {
        return Scalar::real(std::exp(a.value()));
    };
    const auto [value, err] =
        integrate_diagonal(H, Scalar::real(0.3), Scalar::real(0.3), QuadratureConfig{});
    CHECK(value.value() == 0.0);
    CHECK(err == 0.0);
}

TEST_CASE("cubic traces integrate to closed form within 1e-13") {
    // h(s) = 4s^3 - 3s^2 + 2s - 1 has antiderivative s^4 - s^3 + s^2 - s.
    auto h = [](double s) { return ((4 * s - 3) * s + 2) * s - 1; };
    auto F = [](double s) { return ((s - 1) * s + 1) * s * s - s; };
    dqtest::TestRng rng(5);
    for (int i = 0; i < 25; ++i) {
        double a = rng.uniform(0, 1), b = rng.uniform(0, 1);
        if (a > b) std::swap(a, b);
        const QuadResult r = integrate_adaptive(h, a, b, QuadratureConfig{});
        CHECK(std::abs(r.value - (F(b) - F(a))) <= 1e-13);
    }
}

TEST_CASE("additivity across a split point") {
    auto h = [](double s) { return std::exp(s) * std::cos(5 * s); };
    const QuadratureConfig cfg{1e-10, 4000};
    dqtest::TestRng rng(11);
    for (int i = 0; i < 20; ++i) {
        double xs[3] = {rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1)};
        std::sort(xs, xs + 3);
        const double whole = integrate_adaptive(h, xs[0], xs[2], cfg).value;
        const double left = integrate_adaptive(h, xs[0], xs[1], cfg).value;
        const double right = integrate_adaptive(h, xs[1], xs[2], cfg).value;
        CHECK(std::abs(whole - left - right) <= 3.0 * cfg.target_abs_error);
    }
}

TEST_CASE("non-integrable traces surface as NonConvergence") {
    const auto H = [](const Scalar& a, const Scalar&) {
        if (a.value() == 0.0) return Scalar::real(0.0); // never sampled: open rule
        return Scalar::real(1.0 / a.value());
    };
    QuadratureConfig cfg;
    cfg.max_subdivisions = 200;
    bool threw = false;
    try {
        integrate_diagonal(H, Scalar::real(0.0), Scalar::real(1.0), cfg);
    } catch (const NonConvergence& e) {
        threw = true;
        CHECK(e.error_estimate > cfg.target_abs_error);
    }
    CHECK(threw);
}

TEST_CASE("mode and argument validation") {
    const auto H = [](const Scalar& a, const Scalar&) { return a; };
    CHECK_THROWS_AS(
        integrate_diagonal(H, Scalar::exact(0), Scalar::exact(1), QuadratureConfig{}),
        ModeError);
    CHECK_THROWS_AS(
        integrate_diagonal(H, Scalar::real(0.8), Scalar::real(0.2), QuadratureConfig{}),
        DomainError);
    CHECK_THROWS_AS(integrate_adaptive([](double) { return 0.0; }, 0, 1,
                                       QuadratureConfig{-1.0, 100}),
                    DomainError);
    CHECK_THROWS_AS(integrate_adaptive([](double) { return 0.0; }, 0, 1,
                                       QuadratureConfig{1e-10, 0}),
                    DomainError);
}
