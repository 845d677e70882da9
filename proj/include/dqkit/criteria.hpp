#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dqkit/quadrature.hpp"
#include "dqkit/sampling.hpp"
#include "dqkit/scalar.hpp"
#include "dqkit/series.hpp"

namespace dq {

enum class Verdict { Accept, Reject, Inconclusive };
enum class CriterionKind {
    AlgebraicTriple,
    AlgebraicAnchored,
    Matrix,
    Integrable,
    Summation,
    Roundtrip,
    PartialsIdentity
};
enum class AlgebraicVariant { Triple, Anchored };

inline const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Accept: return "accept";
    case Verdict::Reject: return "reject";
    default: return "inconclusive";
    }
}

inline const char* criterion_name(CriterionKind k) {
    switch (k) {
    case CriterionKind::AlgebraicTriple: return "algebraic-triple";
    case CriterionKind::AlgebraicAnchored: return "algebraic-anchored";
    case CriterionKind::Matrix: return "matrix";
    case CriterionKind::Integrable: return "integrable";
    case CriterionKind::Summation: return "summation";
    case CriterionKind::Roundtrip: return "roundtrip";
    default: return "partials-identity";
    }
}

/// The sample that achieved the reported residual: a pair, a triple, or an
/// anti-diagonal index of a power series.
struct Witness {
    std::vector<Scalar> point; // size 2 (pair) or 3 (triple); empty for series
    int antidiagonal = -1;
    double residual = 0.0;
};

struct CriterionReport {
    CriterionKind criterion = CriterionKind::AlgebraicTriple;
    Verdict verdict = Verdict::Inconclusive;
    std::size_t samples_checked = 0;
    std::size_t samples_inconclusive = 0;
    double max_residual = 0.0;
    bool exact_mode = false;
    bool all_residuals_zero = false; // meaningful in exact mode
    std::optional<Witness> witness;
    Tolerance tolerance;
    std::string notes;
};

namespace detail {

// Shared verdict bookkeeping for the sampled criteria. Reductions are
// deterministic: strict inequalities keep the earliest sample on ties.
struct ResidualLedger {
    bool exact = false;
    std::size_t checked = 0;
    std::size_t inconclusive = 0;
    bool all_exact_zero = true;
    double max_abs = 0.0;
    std::optional<std::size_t> max_index;
    double worst_failing_abs = -1.0;
    std::optional<std::size_t> failing_index;
    std::string notes;

    void record(std::size_t index, double abs_residual, bool passed, bool exactly_zero) {
        ++checked;
        if (!exactly_zero) all_exact_zero = false;
        if (!max_index || abs_residual > max_abs) {
            max_abs = abs_residual;
            max_index = index;
        }
        if (!passed && abs_residual > worst_failing_abs) {
            worst_failing_abs = abs_residual;
            failing_index = index;
        }
    }

    void record_error(const std::string& message) {
        ++inconclusive;
        all_exact_zero = false;
        if (notes.size() < 400) {
            if (!notes.empty()) notes += "; ";
            notes += message;
        }
    }

    Verdict verdict() const {
        if (failing_index) return Verdict::Reject;
        if (inconclusive > 0 || checked == 0) return Verdict::Inconclusive;
        return Verdict::Accept;
    }
};

template <class MakeWitness>
CriterionReport finish_report(CriterionKind kind, const ResidualLedger& ledger,
                              const Tolerance& tol, MakeWitness&& make_witness) {
    CriterionReport rep;
    rep.criterion = kind;
    rep.verdict = ledger.verdict();
    rep.samples_checked = ledger.checked;
    rep.samples_inconclusive = ledger.inconclusive;
    rep.max_residual = ledger.max_abs;
    rep.exact_mode = ledger.exact;
    rep.all_residuals_zero = ledger.exact && ledger.checked > 0 && ledger.all_exact_zero &&
                             ledger.inconclusive == 0;
    rep.tolerance = tol;
    rep.notes = ledger.notes;
    if (rep.verdict == Verdict::Reject)
        rep.witness = make_witness(*ledger.failing_index, ledger.worst_failing_abs);
    else if (ledger.max_index)
        rep.witness = make_witness(*ledger.max_index, ledger.max_abs);
    return rep;
}

template <class H>
std::pair<Scalar, Scalar> triple_residual_and_scale(H&& h, const Scalar& a, const Scalar& b,
                                                    const Scalar& c) {
    // Cleared-denominator form of Theorem-style chord additivity; quotient
    // form would amplify float error for near-degenerate triples.
    const Scalar t_ac = h(a, c) * (c - a);
    const Scalar t_ab = h(a, b) * (b - a);
    const Scalar t_bc = h(b, c) * (c - b);
    const Scalar residual = t_ac - t_ab - t_bc;
    if (residual.is_exact()) return {residual, Scalar::exact(0)};
    const double scale = std::max({std::abs(t_ac.to_double()), std::abs(t_ab.to_double()),
                                   std::abs(t_bc.to_double())});
    return {residual, Scalar::real(scale)};
}

} // namespace detail

/// Scaled chord-consistency residual H(a,c)(c-a) - H(a,b)(b-a) - H(b,c)(c-b);
/// zero exactly when the three chords over (a,b,c) agree with one function.
template <class H>
Scalar algebraic_residual_triple(H&& h, const Scalar& a, const Scalar& b, const Scalar& c) {
    return detail::triple_residual_and_scale(h, a, b, c).first;
}

/// Anchored variant pinning a = 0: H(0,c)c - H(0,b)b - H(b,c)(c-b).
template <class H>
Scalar algebraic_residual_anchored(H&& h, const Scalar& b, const Scalar& c) {
    return detail::triple_residual_and_scale(h, Scalar::zero(b.mode()), b, c).first;
}

template <class H>
CriterionReport run_algebraic(H&& h, const SamplingPlan& plan, const Tolerance& tol,
                              AlgebraicVariant variant) {
    detail::ResidualLedger ledger;
    ledger.exact = plan.mode == Mode::Exact;
    std::vector<std::array<Scalar, 3>> samples;

    if (variant == AlgebraicVariant::Triple) {
        for (auto& t : gen_triples(plan)) samples.push_back(t);
    } else {
        const Scalar zero = Scalar::zero(plan.mode);
        for (auto& [b, c] : gen_pairs(plan))
            if (b > zero) // the anchored identity needs 0 < b < c
                samples.push_back({zero, b, c});
    }

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& [a, b, c] = samples[i];
        try {
            const auto [residual, scale] = detail::triple_residual_and_scale(h, a, b, c);
            const bool passed = ledger.exact ? residual.is_zero()
                                             : tol.passes(residual.value(), scale.value());
            ledger.record(i, std::abs(residual.to_double()), passed, residual.is_zero());
        } catch (const Error& e) {
            ledger.record_error(e.what());
        }
    }

    return detail::finish_report(
        variant == AlgebraicVariant::Triple ? CriterionKind::AlgebraicTriple
                                            : CriterionKind::AlgebraicAnchored,
        ledger, tol, [&](std::size_t i, double r) {
            Witness w;
            if (variant == AlgebraicVariant::Triple)
                w.point = {samples[i][0], samples[i][1], samples[i][2]};
            else
                w.point = {samples[i][1], samples[i][2]};
            w.residual = r;
            return w;
        });
}

// ---------------------------------------------------------------------------
// Chord-matrix diagnostics
// ---------------------------------------------------------------------------

/// 3x3 matrix with rows (H(b,c), H(a,c), H(a,b)), (a, b, c), (1, 1, 1);
/// singular exactly when the three chords are consistent with a single f.
struct ChordMatrix {
    std::array<std::array<Scalar, 3>, 3> entries;
    std::array<Scalar, 3> triple;

    double max_abs_entry() const {
        double m = 0.0;
        for (const auto& row : entries)
            for (const auto& e : row) m = std::max(m, std::abs(e.to_double()));
        return m;
    }
};

template <class H>
ChordMatrix chord_matrix(H&& h, const Scalar& a, const Scalar& b, const Scalar& c) {
    if (!(a < b && b < c))
        throw DomainError("chord_matrix needs a strictly increasing triple");
    const Scalar one = Scalar::one(a.mode());
    ChordMatrix m;
    m.entries = {{{h(b, c), h(a, c), h(a, b)}, {a, b, c}, {one, one, one}}};
    m.triple = {a, b, c};
    return m;
}

struct MatrixDiagnostics {
    Scalar det;
    int rank = 0;
    std::optional<std::array<Scalar, 3>> nullspace_basis; // present when rank == 2
};

/// Determinant by cofactor expansion, rank by elimination (exact pivots in
/// exact mode, |pivot| thresholded against tol otherwise). When the rank is 2
/// the null space is spanned by ((b-c)/(c-a), 1, (a-b)/(c-a)).
inline MatrixDiagnostics matrix_diagnostics(const ChordMatrix& m, const Tolerance& tol = {}) {
    const auto& e = m.entries;
    MatrixDiagnostics diag;
    diag.det = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
               e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
               e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);

    const bool exact = diag.det.is_exact();
    const double scale = m.max_abs_entry();
    const double pivot_floor = exact ? 0.0 : tol.abs_tol + tol.rel_tol * scale;

    auto rows = e;
    int rank = 0;
    for (int col = 0; col < 3 && rank < 3; ++col) {
        int pivot = -1;
        double best = pivot_floor;
        for (int r = rank; r < 3; ++r) {
            const double mag = std::abs(rows[r][col].to_double());
            if (exact ? !rows[r][col].is_zero() && pivot < 0 : mag > best) {
                pivot = r;
                best = mag;
            }
        }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = rank + 1; r < 3; ++r) {
            const Scalar factor = rows[r][col] / rows[rank][col];
            for (int cc = col; cc < 3; ++cc)
                rows[r][cc] = rows[r][cc] - factor * rows[rank][cc];
        }
        ++rank;
    }
    diag.rank = rank;

    if (rank == 2) {
        const auto& [a, b, c] = m.triple;
        const Scalar span = c - a;
        diag.nullspace_basis = {{(b - c) / span, Scalar::one(a.mode()), (a - b) / span}};
    }
    return diag;
}

template <class H>
CriterionReport run_matrix(H&& h, const SamplingPlan& plan, const Tolerance& tol) {
    detail::ResidualLedger ledger;
    ledger.exact = plan.mode == Mode::Exact;
    const auto samples = gen_triples(plan);

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& [a, b, c] = samples[i];
        try {
            const ChordMatrix m = chord_matrix(h, a, b, c);
            const MatrixDiagnostics diag = matrix_diagnostics(m, tol);
            const double scale = m.max_abs_entry();
            // det has the dimensions of entry^3, so the relative budget is
            // scaled by the cube of the largest entry.
            const bool passed = ledger.exact
                                    ? diag.det.is_zero()
                                    : tol.passes(diag.det.to_double(), scale * scale * scale);
            bool certified = true;
            if (passed && diag.nullspace_basis) {
                // Null-space certificate: M v must vanish to tol * max entry.
                const auto& v = *diag.nullspace_basis;
                for (int r = 0; r < 3 && certified; ++r) {
                    Scalar dot = m.entries[r][0] * v[0];
                    dot = dot + m.entries[r][1] * v[1];
                    dot = dot + m.entries[r][2] * v[2];
                    if (ledger.exact ? !dot.is_zero()
                                     : !tol.passes(dot.to_double(), scale))
                        certified = false;
                }
            }
            if (passed && !certified) {
                ledger.record_error("null-space certificate failed at sample " +
                                    std::to_string(i));
                continue;
            }
            ledger.record(i, std::abs(diag.det.to_double()), passed, diag.det.is_zero());
        } catch (const Error& e) {
            ledger.record_error(e.what());
        }
    }

    return detail::finish_report(CriterionKind::Matrix, ledger, tol,
                                 [&](std::size_t i, double r) {
                                     Witness w;
                                     w.point = {samples[i][0], samples[i][1], samples[i][2]};
                                     w.residual = r;
                                     return w;
                                 });
}

// ---------------------------------------------------------------------------
// Integrable criterion
// ---------------------------------------------------------------------------

struct IntegrableResidual {
    double residual = 0.0;
    double quad_error = 0.0;
    double scale = 0.0;
};

/// Cleared-form residual (b-a) H(a,b) - integral of H(s,s) over [a,b].
/// Float mode only; NonConvergence from the quadrature propagates.
template <class H>
IntegrableResidual integrable_residual(H&& h, const Scalar& a, const Scalar& b,
                                       const QuadratureConfig& cfg) {
    if (a.is_exact() || b.is_exact())
        throw ModeError("the integrable criterion runs in float mode only");
    if (!(a < b)) throw DomainError("integrable_residual needs a < b");
    const double chord = (b - a).value() * h(a, b).value();
    const auto [integral, quad_error] = integrate_diagonal(h, a, b, cfg);
    IntegrableResidual r;
    r.residual = chord - integral.value();
    r.quad_error = quad_error;
    r.scale = std::max(std::abs(chord), std::abs(integral.value()));
    return r;
}

template <class H>
CriterionReport run_integrable(H&& h, const SamplingPlan& plan, const Tolerance& tol,
                               const QuadratureConfig& cfg) {
    detail::ResidualLedger ledger;
    ledger.exact = false;
    if (plan.mode == Mode::Exact)
        throw ModeError("the integrable criterion runs in float mode only");
    const auto samples = gen_pairs(plan);

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& [a, b] = samples[i];
        try {
            const IntegrableResidual r = integrable_residual(h, a, b, cfg);
            // The quadrature error must stay inside the tolerance budget or
            // a pass would be unearned.
            const bool passed =
                tol.passes(r.residual, r.scale) && r.quad_error <= tol.abs_tol;
            ledger.record(i, std::abs(r.residual), passed, r.residual == 0.0);
        } catch (const Error& e) {
            ledger.record_error(e.what());
        }
    }

    return detail::finish_report(CriterionKind::Integrable, ledger, tol,
                                 [&](std::size_t i, double r) {
                                     Witness w;
                                     w.point = {samples[i].first, samples[i].second};
                                     w.residual = r;
                                     return w;
                                 });
}

// ---------------------------------------------------------------------------
// Summation criterion
// ---------------------------------------------------------------------------

struct SummationResult {
    CriterionReport report;
    std::map<int, Scalar> profile; // p -> common anti-diagonal value
};

/// Anti-diagonal constancy check: H is a difference quotient of an analytic f
/// exactly when every anti-diagonal {c_ij : i+j = p} is a single constant c_p.
/// Exact mode demands equality; float mode compares every pair within tol.
inline SummationResult summation_check(const PowerSeries2D& series, const Tolerance& tol) {
    const Mode mode = series.coefficients().empty()
                          ? Mode::Exact
                          : series.coefficients().begin()->second.mode();
    detail::ResidualLedger ledger;
    ledger.exact = mode == Mode::Exact;

    SummationResult result;
    std::vector<int> failing_p;
    for (int p = 0; p <= series.order(); ++p) {
        std::vector<Scalar> values;
        values.reserve(p + 1);
        for (int i = 0; i <= p; ++i) values.push_back(series.coeff(i, p - i, mode));

        double max_diff = 0.0;
        bool constant = true;
        bool all_zero_diffs = true;
        for (std::size_t i = 0; i < values.size(); ++i) {
            for (std::size_t j = i + 1; j < values.size(); ++j) {
                const Scalar diff = values[i] - values[j];
                if (!diff.is_zero()) all_zero_diffs = false;
                const double ref = std::max(std::abs(values[i].to_double()),
                                            std::abs(values[j].to_double()));
                if (!tol.passes(diff, Scalar::real(ref))) constant = false;
                max_diff = std::max(max_diff, std::abs(diff.to_double()));
            }
        }
        ledger.record(static_cast<std::size_t>(p), max_diff, constant, all_zero_diffs);
        if (!constant) {
            failing_p.push_back(p);
            continue;
        }
        if (mode == Mode::Exact || values.size() == 1) {
            result.profile.emplace(p, values.front());
        } else {
            double mean = 0.0;
            for (const auto& v : values) mean += v.value();
            result.profile.emplace(p, Scalar::real(mean / static_cast<double>(values.size())));
        }
    }

    result.report = detail::finish_report(CriterionKind::Summation, ledger, tol,
                                          [&](std::size_t p, double r) {
                                              Witness w;
                                              w.antidiagonal = static_cast<int>(p);
                                              w.residual = r;
                                              return w;
                                          });
    return result;
}

enum class ConvergenceVerdict { Plausible, Implausible, Unknown };

inline const char* convergence_name(ConvergenceVerdict v) {
    switch (v) {
    case ConvergenceVerdict::Plausible: return "plausible";
    case ConvergenceVerdict::Implausible: return "implausible";
    default: return "unknown";
    }
}

/// Ratio heuristic on the anti-diagonal absolute sums S_p = sum |c_ij|.
/// The tail ratios S_{p+1}/S_p trending below 1 makes absolute convergence
/// on the closed triangle plausible; a truncation order below 8 is too short
/// to call.
inline ConvergenceVerdict absolute_convergence_probe(const PowerSeries2D& series) {
    const int P = series.order();
    if (P < 8) return ConvergenceVerdict::Unknown;

    const Mode mode = series.coefficients().empty()
                          ? Mode::Exact
                          : series.coefficients().begin()->second.mode();
    std::vector<double> s(P + 1, 0.0);
    for (int p = 0; p <= P; ++p)
        for (int i = 0; i <= p; ++i)
            s[p] += std::abs(series.coeff(i, p - i, mode).to_double());

    bool any_ratio = false;
    double worst = 0.0;
    for (int p = P / 2; p < P; ++p) {
        if (s[p] == 0.0 && s[p + 1] == 0.0) continue;
        any_ratio = true;
        // A jump out of an identically-zero band counts as non-decay.
        const double ratio = s[p] == 0.0 ? 2.0 : s[p + 1] / s[p];
        worst = std::max(worst, ratio);
    }
    if (!any_ratio) return ConvergenceVerdict::Plausible; // tail is identically zero
    return worst < 1.0 ? ConvergenceVerdict::Plausible : ConvergenceVerdict::Implausible;
}

} // namespace dq
