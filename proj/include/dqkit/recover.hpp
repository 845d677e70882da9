#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <vector>

#include "dqkit/quadrature.hpp"
#include "dqkit/scalar.hpp"

namespace dq {

enum class RecoveredKind { Algebraic, Integral, Series };

inline const char* recovered_kind_name(RecoveredKind k) {
    switch (k) {
    case RecoveredKind::Algebraic: return "algebraic";
    case RecoveredKind::Integral: return "integral";
    default: return "series";
    }
}

/// A function f reconstructed from an accepted H, evaluable on [0,1].
/// Reconstruction never re-verifies a criterion; run one first.
class RecoveredFunction {
public:
    RecoveredKind kind() const { return kind_; }
    const Scalar& constant() const { return constant_; }

    Scalar operator()(const Scalar& x) const { return eval_(x); }

    /// Series recoveries expose their coefficients (c_0 ... c_P).
    const std::vector<Scalar>* series_coefficients() const {
        return kind_ == RecoveredKind::Series ? &series_ : nullptr;
    }

    /// Text export `p c_p` per line plus a trailing `C <value>` line.
    void export_series(std::ostream& out) const {
        if (kind_ != RecoveredKind::Series)
            throw DomainError("series export needs a series-kind recovery");
        for (std::size_t p = 0; p < series_.size(); ++p)
            out << p << ' ' << series_[p].str() << '\n';
        out << "C " << constant_.str() << '\n';
    }

private:
    template <class H>
    friend RecoveredFunction recover_algebraic(H&& h, const Scalar& C);
    template <class H>
    friend RecoveredFunction recover_integral(H&& h, const Scalar& C,
                                              const QuadratureConfig& cfg);
    friend RecoveredFunction recover_series(const std::map<int, Scalar>& profile,
                                            const Scalar& C, int order);

    RecoveredKind kind_ = RecoveredKind::Algebraic;
    Scalar constant_;
    std::vector<Scalar> series_;
    std::function<Scalar(const Scalar&)> eval_;
};

/// f(x) = x H(0,x) + C with the case split f(0) = C.
template <class H>
RecoveredFunction recover_algebraic(H&& h, const Scalar& C) {
    RecoveredFunction f;
    f.kind_ = RecoveredKind::Algebraic;
    f.constant_ = C;
    f.eval_ = [h = std::function<Scalar(const Scalar&, const Scalar&)>(h),
               C](const Scalar& x) {
        if (x.is_zero()) return C;
        return x * h(Scalar::zero(x.mode()), x) + C;
    };
    return f;
}

namespace detail {

// Prefix integrals of the diagonal trace at the breakpoints k/32, extended
// lazily under a lock. Segment integrals are independent of evaluation order,
// so cached values are deterministic.
template <class H>
struct DiagonalPrefix {
    static constexpr int kSegments = 32;

    H h;
    QuadratureConfig cfg;
    std::mutex mutex;
    std::vector<double> prefix{0.0};

    double up_to(int k) {
        std::lock_guard<std::mutex> lock(mutex);
        QuadratureConfig seg_cfg = cfg;
        seg_cfg.target_abs_error = cfg.target_abs_error / kSegments;
        while (static_cast<int>(prefix.size()) <= k) {
            const int i = static_cast<int>(prefix.size());
            const auto [seg, err] =
                integrate_diagonal(h, Scalar::real((i - 1) / double(kSegments)),
                                   Scalar::real(i / double(kSegments)), seg_cfg);
            (void)err;
            prefix.push_back(prefix.back() + seg.value());
        }
        return prefix[k];
    }
};

} // namespace detail

/// f(x) = integral of H(s,s) over [0,x] plus C, float mode. Breakpoint
/// integrals at x = k/32 are memoized; intermediate x costs one short
/// quadrature after warm-up. NonConvergence surfaces at evaluation time.
template <class H>
RecoveredFunction recover_integral(H&& h, const Scalar& C, const QuadratureConfig& cfg) {
    if (C.is_exact()) throw ModeError("integral recovery runs in float mode only");
    RecoveredFunction f;
    f.kind_ = RecoveredKind::Integral;
    f.constant_ = C;
    using Fn = std::function<Scalar(const Scalar&, const Scalar&)>;
    auto memo = std::make_shared<detail::DiagonalPrefix<Fn>>();
    memo->h = Fn(h);
    memo->cfg = cfg;
    f.eval_ = [memo, cfg, C](const Scalar& x) {
        const double xv = x.value();
        if (!(0.0 <= xv && xv <= 1.0))
            throw DomainError("recovered function is defined on [0,1]");
        const int k = std::min(static_cast<int>(xv * 32.0), 32);
        const double base = memo->up_to(k);
        const auto [tail, err] =
            integrate_diagonal(memo->h, Scalar::real(k / 32.0), Scalar::real(xv), cfg);
        (void)err;
        return Scalar::real(base + tail.value() + C.value());
    };
    return f;
}

/// f(x) = sum_{p=0}^{P} c_p x^{p+1} + C from an anti-diagonal profile.
inline RecoveredFunction recover_series(const std::map<int, Scalar>& profile, const Scalar& C,
                                        int order) {
    if (order < 0) throw DomainError("series order must be nonnegative");
    std::vector<Scalar> coeffs;
    coeffs.reserve(order + 1);
    for (int p = 0; p <= order; ++p) {
        auto it = profile.find(p);
        if (it == profile.end())
            throw MissingCoefficient("profile is missing c_" + std::to_string(p));
        coeffs.push_back(it->second);
    }
    RecoveredFunction f;
    f.kind_ = RecoveredKind::Series;
    f.constant_ = C;
    f.series_ = coeffs;
    f.eval_ = [coeffs, C](const Scalar& x) {
        // Horner on sum c_p x^p, then one extra multiply for the x^(p+1) shift.
        Scalar acc = coeffs.back();
        for (std::size_t p = coeffs.size() - 1; p-- > 0;) acc = coeffs[p] + x * acc;
        return x * acc + C;
    };
    return f;
}

} // namespace dq
