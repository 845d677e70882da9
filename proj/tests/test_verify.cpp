#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace dq;

namespace {

Scalar ex(long p, long q = 1) { return Scalar::exact(Rational(p) / Rational(q)); }
Scalar fl(double v) { return Scalar::real(v); }

SamplingPlan float_plan(std::uint64_t seed, std::size_t count, double min_gap = 1e-3) {
    SamplingPlan p;
    p.seed = seed;
    p.count = count;
    p.min_gap = min_gap;
    return p;
}

} // namespace

TEST_CASE("DQView basics") {
    const auto x2 = dqtest::poly_fn({0, 0, 1});
    const DQView dq_plain = dq_of(x2);
    CHECK(dq_plain(fl(0.25), fl(0.75)).value() == 1.0);
    CHECK(dq_plain(fl(0.75), fl(0.25)).value() == 1.0); // symmetric extension
    CHECK_THROWS_AS(dq_plain(fl(0.5), fl(0.5)), DiagonalUndefined);

    const auto x3 = dqtest::poly_fn({0, 0, 0, 1});
    const auto dx3 = dqtest::poly_fn({0, 0, 3});
    const DQView dq_diag = dq_of(x3, dx3);
    CHECK(dq_diag(fl(0.5), fl(0.5)).value() == 0.75); // f'(1/2) = 3/4
    CHECK(dq_diag.has_derivative());
}

TEST_CASE("DQView is symmetric over sampled pairs") {
    const auto f = dqtest::poly_fn({1, -1, 2, 0.5});
    const DQView dq = dq_of(f);
    for (const auto& [a, b] : gen_pairs(float_plan(4, 40)))
        CHECK(dq(a, b).value() == dq(b, a).value());
}

TEST_CASE("roundtrip closes on the Dirichlet recovery, exactly") {
    const auto Hd = as_bivariate(parse_expr(kDirichletExpr, Arity::Bivariate));
    const RecoveredFunction f = recover_algebraic(Hd, ex(1));
    SamplingPlan plan;
    plan.mode = Mode::Exact;
    plan.min_gap = 0.0;
    plan.count = 36;
    plan.exact_pool = {ex(0), ex(1, 4), ex(1, 2), Scalar::exact(0, Rational(1, 2)),
                       Scalar::exact(0, Rational(3, 4)), ex(1)};
    const CriterionReport rep =
        roundtrip_check(Hd, [&f](const Scalar& x) { return f(x); }, plan, Tolerance{});
    CHECK(rep.verdict == Verdict::Accept);
    CHECK(rep.all_residuals_zero);
}

TEST_CASE("roundtrip accepts the truncated factorial series at 1e-12") {
    PowerSeries2D s(20);
    double factorial = 1.0;
    for (int p = 0; p <= 20; ++p) {
        if (p > 0) factorial *= p;
        for (int i = 0; i <= p; ++i) s.set(i, p - i, fl(1.0 / factorial));
    }
    const auto H = [&s](const Scalar& a, const Scalar& b) { return s.eval(a, b); };
    std::map<int, Scalar> profile;
    factorial = 1.0;
    for (int p = 0; p <= 20; ++p) {
        if (p > 0) factorial *= p;
        profile.emplace(p, fl(1.0 / factorial));
    }
    const RecoveredFunction f = recover_series(profile, fl(0.0), 20);
    const CriterionReport rep = roundtrip_check(
        H, [&f](const Scalar& x) { return f(x); }, float_plan(6, 48), Tolerance{1e-12, 1e-12});
    CHECK(rep.verdict == Verdict::Accept);
    CHECK(rep.max_residual <= 1e-12);
}

TEST_CASE("roundtrip rejects the ab impostor") {
    const auto H_ab = [](const Scalar& a, const Scalar& b) { return a * b; };
    // x H(0,x) collapses to 0, so the recovered f is constant and its DQ
    // vanishes while H does not.
    const RecoveredFunction f = recover_algebraic(H_ab, fl(0.0));
    const CriterionReport rep = roundtrip_check(
        H_ab, [&f](const Scalar& x) { return f(x); }, float_plan(8, 48), Tolerance{});
    CHECK(rep.verdict == Verdict::Reject);
    REQUIRE(rep.witness.has_value());
}

TEST_CASE("partials identity for x^3") {
    const auto f = dqtest::poly_fn({0, 0, 0, 1});
    const auto df = dqtest::poly_fn({0, 0, 3});
    const CriterionReport rep =
        partials_identity_check(f, df, float_plan(10, 32), 1e-4, Tolerance{1e-6, 0.0});
    CHECK(rep.verdict == Verdict::Accept);
    CHECK(rep.max_residual <= 1e-6);

    const CriterionReport half =
        partials_identity_check(f, df, float_plan(10, 32), 5e-5, Tolerance{1e-6, 0.0});
    const double factor = rep.max_residual / half.max_residual;
    CHECK(factor >= 3.5);
    CHECK(factor <= 4.5);
}

TEST_CASE("partials identity for linear f is exactly balanced") {
    const auto f = dqtest::poly_fn({0, 5});
    const auto df = dqtest::poly_fn({5});
    const CriterionReport rep =
        partials_identity_check(f, df, float_plan(2, 24), 1e-4, Tolerance{1e-12, 0.0});
    CHECK(rep.verdict == Verdict::Accept);
}

TEST_CASE("partials identity for a DSL exponential") {
    const auto f = as_univariate(parse_expr("exp(x)", Arity::Univariate));
    const auto df = as_univariate(parse_expr("exp(x)", Arity::Univariate));
    const CriterionReport rep =
        partials_identity_check(f, df, float_plan(12, 32), 1e-4, Tolerance{1e-6, 0.0});
    CHECK(rep.verdict == Verdict::Accept);
    CHECK(rep.max_residual <= 1e-6);

    const CriterionReport half =
        partials_identity_check(f, df, float_plan(12, 32), 5e-5, Tolerance{1e-6, 0.0});
    const double factor = rep.max_residual / half.max_residual;
    CHECK(factor >= 3.5);
    CHECK(factor <= 4.5);
}

TEST_CASE("partials identity rejects oversized steps") {
    const auto f = dqtest::poly_fn({0, 0, 1});
    const auto df = dqtest::poly_fn({0, 2});
    // 4h = 1.2 exceeds every possible gap in [0,1].
    CHECK_THROWS_AS(
        partials_identity_check(f, df, float_plan(1, 16, /*min_gap=*/1e-3), 0.3,
                                Tolerance{}),
        StepTooLarge);
    CHECK_THROWS_AS(
        partials_identity_check(f, df, float_plan(1, 16), -1e-4, Tolerance{}),
        DomainError);
    SamplingPlan exact;
    exact.mode = Mode::Exact;
    exact.exact_pool = {ex(0), ex(1)};
    CHECK_THROWS_AS(partials_identity_check(f, df, exact, 1e-4, Tolerance{}), ModeError);
}

TEST_CASE("difference quotients of low-degree polynomials pass all float criteria") {
    dqtest::TestRng rng(515);
    const QuadratureConfig cfg{1e-10, 4000};
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<double> coeffs;
        const int degree = 1 + (int)rng.integer(6);
        for (int k = 0; k <= degree; ++k) coeffs.push_back(rng.uniform(-2, 2));
        const auto f = dqtest::poly_fn(coeffs);
        const auto df = dqtest::poly_fn(dqtest::poly_derivative(coeffs));
        const DQView H = dq_of(f, df);
        const auto plan = float_plan(900 + trial, 32);
        CHECK(run_algebraic(H, plan, Tolerance{}, AlgebraicVariant::Triple).verdict ==
              Verdict::Accept);
        CHECK(run_algebraic(H, plan, Tolerance{}, AlgebraicVariant::Anchored).verdict ==
              Verdict::Accept);
        CHECK(run_matrix(H, plan, Tolerance{}).verdict == Verdict::Accept);
        CHECK(run_integrable(H, plan, Tolerance{}, cfg).verdict == Verdict::Accept);
    }
}
