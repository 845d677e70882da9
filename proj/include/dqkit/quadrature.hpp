#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "dqkit/scalar.hpp"

namespace dq {

struct QuadratureConfig {
    double target_abs_error = 1e-10;
    int max_subdivisions = 4000;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

namespace detail {

// Gauss 7 / Kronrod 15 nested pair (QUADPACK abscissae and weights).
// The embedded Gauss rule is exact through degree 13, far past the
// degree-3 exactness the base rule must guarantee.
struct GaussKronrod15 {
    static constexpr double xgk[8] = {
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000};
    static constexpr double wgk[8] = {
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327};
};

// One panel on [a,b]: Kronrod value plus a QUADPACK-style error estimate.
template <class F>
std::pair<double, double> gk15_panel(F&& f, double a, double b) {
    using R = GaussKronrod15;
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double result_gauss = R::wg[3] * fc;
    double result_kronrod = R::wgk[7] * fc;
    double resabs = std::abs(result_kronrod);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * R::xgk[i];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        result_kronrod += R::wgk[i] * (f1 + f2);
        resabs += R::wgk[i] * (std::abs(f1) + std::abs(f2));
        if (i % 2 == 1) result_gauss += R::wg[i / 2] * (f1 + f2);
    }
    result_kronrod *= half;
    result_gauss *= half;
    resabs *= std::abs(half);

    double err = std::abs(result_kronrod - result_gauss);
    if (err != 0.0) err = std::pow(200.0 * err, 1.5);
    const double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    err = std::max(err, round_floor);
    return {result_kronrod, err};
}

// Depth-first, left interval first; accepted panels accumulate in strict
// left-to-right order so the sum is reproducible.
template <class F>
void adapt(F&& f, double a, double b, double local_target, int& budget, double& value,
           double& err_sum, bool& converged) {
    const auto [panel, err] = gk15_panel(f, a, b);
    if (err <= local_target || budget <= 0 ||
        b - a <= std::numeric_limits<double>::epsilon() * 4.0) {
        if (err > local_target) converged = false;
        value += panel;
        err_sum += err;
        return;
    }
    --budget;
    const double mid = 0.5 * (a + b);
    adapt(f, a, mid, local_target * 0.5, budget, value, err_sum, converged);
    adapt(f, mid, b, local_target * 0.5, budget, value, err_sum, converged);
}

} // namespace detail

/// Adaptive integral of a double-valued f over [a,b]. Never throws for
/// non-convergence; inspect the result flags.
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, const QuadratureConfig& cfg) {
    if (!(cfg.target_abs_error > 0.0))
        throw DomainError("target_abs_error must be positive");
    if (cfg.max_subdivisions < 1)
        throw DomainError("max_subdivisions must be at least 1");
    if (a == b) return {0.0, 0.0, true};
    if (a > b) throw DomainError("integrate: lower bound exceeds upper bound");

    QuadResult res;
    int budget = cfg.max_subdivisions;
    detail::adapt(f, a, b, cfg.target_abs_error, budget, res.value, res.error_estimate,
                  res.converged);
    if (!std::isfinite(res.value))
        throw EvalError("integrand produced a non-finite value");
    return res;
}

/// Integral of the diagonal trace h(s) = H(s,s) over [a,b] in [0,1].
/// Float mode only. Throws NonConvergence (carrying the best estimate) when
/// the subdivision budget is exhausted before the target error is met.
template <class H>
std::pair<Scalar, double> integrate_diagonal(H&& h, const Scalar& a, const Scalar& b,
                                             const QuadratureConfig& cfg) {
    if (a.is_exact() || b.is_exact())
        throw ModeError("exact-mode integration is unsupported");
    const double lo = a.value(), hi = b.value();
    if (!(0.0 <= lo && lo <= hi && hi <= 1.0))
        throw DomainError("integrate_diagonal needs 0 <= a <= b <= 1");
    auto trace = [&h](double s) {
        const Scalar v = h(Scalar::real(s), Scalar::real(s));
        return v.value();
    };
    const QuadResult res = integrate_adaptive(trace, lo, hi, cfg);
    if (!res.converged || res.error_estimate > cfg.target_abs_error)
        throw NonConvergence(res.value, res.error_estimate);
    return {Scalar::real(res.value), res.error_estimate};
}

} // namespace dq
