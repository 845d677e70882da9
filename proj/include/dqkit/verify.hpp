#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "dqkit/criteria.hpp"
#include "dqkit/sampling.hpp"
#include "dqkit/scalar.hpp"

namespace dq {

/// The forward construction: f viewed as the bivariate H(a,b) =
/// (f(b)-f(a))/(b-a). Reversed arguments give the symmetric extension for
/// free; the diagonal needs a caller-supplied derivative and returns f'(a).
class DQView {
public:
    using Fn = std::function<Scalar(const Scalar&)>;

    explicit DQView(Fn f, Fn derivative = nullptr)
        : f_(std::move(f)), df_(std::move(derivative)) {}

    Scalar operator()(const Scalar& a, const Scalar& b) const {
        if (a == b) {
            if (!df_) throw DiagonalUndefined();
            return df_(a);
        }
        return (f_(b) - f_(a)) / (b - a);
    }

    bool has_derivative() const { return static_cast<bool>(df_); }

private:
    Fn f_;
    Fn df_;
};

template <class F>
DQView dq_of(F&& f) {
    return DQView(DQView::Fn(std::forward<F>(f)));
}

template <class F, class DF>
DQView dq_of(F&& f, DF&& derivative) {
    return DQView(DQView::Fn(std::forward<F>(f)), DQView::Fn(std::forward<DF>(derivative)));
}

/// Closes the loop behind each recovery: compares DQ of the recovered f
/// against the original H on sampled pairs.
template <class H, class F>
CriterionReport roundtrip_check(H&& h, F&& f, const SamplingPlan& plan, const Tolerance& tol) {
    detail::ResidualLedger ledger;
    ledger.exact = plan.mode == Mode::Exact;
    const auto samples = gen_pairs(plan);
    const DQView dq{DQView::Fn(f)};

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& [a, b] = samples[i];
        try {
            const Scalar lhs = dq(a, b);
            const Scalar rhs = h(a, b);
            const Scalar residual = lhs - rhs;
            const bool passed =
                ledger.exact
                    ? residual.is_zero()
                    : tol.passes(residual.value(),
                                 std::max(std::abs(lhs.to_double()), std::abs(rhs.to_double())));
            ledger.record(i, std::abs(residual.to_double()), passed, residual.is_zero());
        } catch (const Error& e) {
            ledger.record_error(e.what());
        }
    }

    return detail::finish_report(CriterionKind::Roundtrip, ledger, tol,
                                 [&](std::size_t i, double r) {
                                     Witness w;
                                     w.point = {samples[i].first, samples[i].second};
                                     w.residual = r;
                                     return w;
                                 });
}

/// Checks (d/da + d/db) DQ_f = DQ_f' by second-order central differences of
/// step h at sampled pairs. Pairs must keep b - a >= 4h so the stencil never
/// crosses the diagonal.
template <class F, class DF>
CriterionReport partials_identity_check(F&& f, DF&& derivative, const SamplingPlan& plan,
                                        double step, const Tolerance& tol) {
    if (plan.mode == Mode::Exact)
        throw ModeError("the partials identity check runs in float mode only");
    if (!(step > 0.0)) throw DomainError("step must be positive");

    const auto samples = gen_pairs(plan);
    for (const auto& [a, b] : samples)
        if ((b - a).value() < 4.0 * step)
            throw StepTooLarge("pair gap " + std::to_string((b - a).value()) +
                               " is below 4h = " + std::to_string(4.0 * step));

    const DQView dq{DQView::Fn(f)};
    const DQView dq_prime{DQView::Fn(derivative)};
    detail::ResidualLedger ledger;
    ledger.exact = false;

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& [a, b] = samples[i];
        try {
            const double av = a.value(), bv = b.value();
            auto at = [&](double x, double y) {
                return dq(Scalar::real(x), Scalar::real(y)).value();
            };
            const double da = (at(av + step, bv) - at(av - step, bv)) / (2.0 * step);
            const double db = (at(av, bv + step) - at(av, bv - step)) / (2.0 * step);
            const double rhs = dq_prime(a, b).value();
            const double residual = da + db - rhs;
            ledger.record(i, std::abs(residual), tol.passes(residual, rhs), residual == 0.0);
        } catch (const Error& e) {
            ledger.record_error(e.what());
        }
    }

    return detail::finish_report(CriterionKind::PartialsIdentity, ledger, tol,
                                 [&](std::size_t i, double r) {
                                     Witness w;
                                     w.point = {samples[i].first, samples[i].second};
                                     w.residual = r;
                                     return w;
                                 });
}

} // namespace dq
