#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dqkit/criteria.hpp"
#include "dqkit/expr.hpp"
#include "dqkit/recover.hpp"
#include "dqkit/verify.hpp"

namespace dq {

using json = nlohmann::json;

enum class Command { Check, Recover, Verify, Demo };
enum class CriterionSelect { Algebraic, Matrix, Integrable, Summation, All };

inline const char* command_name(Command c) {
    switch (c) {
    case Command::Check: return "check";
    case Command::Recover: return "recover";
    case Command::Verify: return "verify";
    default: return "demo";
    }
}

inline const char* select_name(CriterionSelect s) {
    switch (s) {
    case CriterionSelect::Algebraic: return "algebraic";
    case CriterionSelect::Matrix: return "matrix";
    case CriterionSelect::Integrable: return "integrable";
    case CriterionSelect::Summation: return "summation";
    default: return "all";
    }
}

inline CriterionSelect select_from_name(const std::string& s) {
    if (s == "algebraic") return CriterionSelect::Algebraic;
    if (s == "matrix") return CriterionSelect::Matrix;
    if (s == "integrable") return CriterionSelect::Integrable;
    if (s == "summation") return CriterionSelect::Summation;
    if (s == "all") return CriterionSelect::All;
    throw DomainError("unknown criterion '" + s + "'");
}

/// Everything that determines a run. The copy embedded in a report replays
/// the run byte-identically.
struct RunManifest {
    Command command = Command::Check;
    std::string demo;            // demo name when command == Demo
    std::string expr;            // bivariate H source (check/recover/demo) or f (verify)
    std::string derivative_expr; // verify: optional f'
    std::string series_path;     // summation input file
    CriterionSelect criterion = CriterionSelect::Algebraic;
    Mode mode = Mode::Float;
    std::vector<std::string> pool; // exact-mode pool, scalar text forms
    std::uint64_t seed = 42;
    std::size_t count = 64;
    double min_gap = 1e-3;
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double quad_tol = 1e-10;
    std::string constant = "0"; // recovery constant C, scalar text
    std::string out;            // report destination; empty means stdout
    std::optional<double> roundtrip_abs_tol; // defaults to abs_tol
    std::optional<double> roundtrip_rel_tol; // defaults to rel_tol
    double step = 1e-4;                      // verify: finite-difference step
    bool timing = false; // wall time is opt-in so default reports stay reproducible
};

inline json manifest_to_json(const RunManifest& m) {
    json j;
    j["command"] = command_name(m.command);
    j["demo"] = m.demo;
    j["expr"] = m.expr;
    j["derivative_expr"] = m.derivative_expr;
    j["series"] = m.series_path;
    j["criterion"] = select_name(m.criterion);
    j["mode"] = mode_name(m.mode);
    j["pool"] = m.pool;
    j["seed"] = m.seed;
    j["count"] = m.count;
    j["min_gap"] = m.min_gap;
    j["abs_tol"] = m.abs_tol;
    j["rel_tol"] = m.rel_tol;
    j["quad_tol"] = m.quad_tol;
    j["constant"] = m.constant;
    j["out"] = m.out;
    j["roundtrip_abs_tol"] =
        m.roundtrip_abs_tol ? json(*m.roundtrip_abs_tol) : json(nullptr);
    j["roundtrip_rel_tol"] =
        m.roundtrip_rel_tol ? json(*m.roundtrip_rel_tol) : json(nullptr);
    j["step"] = m.step;
    j["timing"] = m.timing;
    return j;
}

inline RunManifest manifest_from_json(const json& j) {
    RunManifest m;
    const std::string cmd = j.at("command").get<std::string>();
    if (cmd == "check") m.command = Command::Check;
    else if (cmd == "recover") m.command = Command::Recover;
    else if (cmd == "verify") m.command = Command::Verify;
    else if (cmd == "demo") m.command = Command::Demo;
    else throw DomainError("unknown command '" + cmd + "'");
    m.demo = j.value("demo", "");
    m.expr = j.value("expr", "");
    m.derivative_expr = j.value("derivative_expr", "");
    m.series_path = j.value("series", "");
    m.criterion = select_from_name(j.value("criterion", "algebraic"));
    m.mode = j.value("mode", "float") == std::string("exact") ? Mode::Exact : Mode::Float;
    if (j.contains("pool")) m.pool = j.at("pool").get<std::vector<std::string>>();
    m.seed = j.value("seed", std::uint64_t{42});
    m.count = j.value("count", std::size_t{64});
    m.min_gap = j.value("min_gap", 1e-3);
    m.abs_tol = j.value("abs_tol", 1e-9);
    m.rel_tol = j.value("rel_tol", 1e-9);
    m.quad_tol = j.value("quad_tol", 1e-10);
    m.constant = j.value("constant", "0");
    m.out = j.value("out", "");
    if (j.contains("roundtrip_abs_tol") && !j.at("roundtrip_abs_tol").is_null())
        m.roundtrip_abs_tol = j.at("roundtrip_abs_tol").get<double>();
    if (j.contains("roundtrip_rel_tol") && !j.at("roundtrip_rel_tol").is_null())
        m.roundtrip_rel_tol = j.at("roundtrip_rel_tol").get<double>();
    m.step = j.value("step", 1e-4);
    m.timing = j.value("timing", false);
    return m;
}

inline json witness_to_json(const Witness& w) {
    json j;
    if (w.antidiagonal >= 0) {
        j["kind"] = "antidiagonal";
        j["p"] = w.antidiagonal;
    } else {
        j["kind"] = w.point.size() == 3 ? "triple" : "pair";
        json pt = json::array();
        for (const auto& s : w.point) pt.push_back(s.str());
        j["point"] = pt;
    }
    j["residual"] = w.residual;
    return j;
}

inline json criterion_report_to_json(const CriterionReport& rep) {
    json j;
    j["criterion"] = criterion_name(rep.criterion);
    j["verdict"] = verdict_name(rep.verdict);
    j["samples_checked"] = rep.samples_checked;
    j["samples_inconclusive"] = rep.samples_inconclusive;
    j["max_residual"] = rep.max_residual;
    j["exact_mode"] = rep.exact_mode;
    j["all_residuals_zero"] = rep.all_residuals_zero;
    j["tolerance"] = {{"abs_tol", rep.tolerance.abs_tol}, {"rel_tol", rep.tolerance.rel_tol}};
    j["witness"] = rep.witness ? witness_to_json(*rep.witness) : json(nullptr);
    j["notes"] = rep.notes;
    return j;
}

struct RunOutcome {
    int exit_code = 3;
    json report;
};

// ---------------------------------------------------------------------------
// Built-in demo problems (the paper walkthroughs, pinned for reproducibility)
// ---------------------------------------------------------------------------

/// The rationality-switching H of the Dirichlet walkthrough.
inline constexpr const char* kDirichletExpr =
    "piecewise{rat(a)&&rat(b):0;!rat(a)&&!rat(b):0;!rat(a):1/(b-a);true:-1/(b-a)}";

inline const std::vector<std::string>& dirichlet_pool() {
    static const std::vector<std::string> pool = {
        "0", "1/4", "1/3", "1/2", "3/4", "1/2*sqrt2", "1/3*sqrt2", "3/4*sqrt2", "1"};
    return pool;
}

/// H(a,b) = average value of e^{x^2} over [a,b], extended by H(a,a)=e^{a^2};
/// the average is itself computed by quadrature at the pinned inner target.
inline std::function<Scalar(const Scalar&, const Scalar&)> average_exp_sq() {
    const QuadratureConfig inner{1e-12, 4000};
    return [inner](const Scalar& a, const Scalar& b) {
        const double av = a.value(), bv = b.value();
        if (av == bv) return Scalar::real(std::exp(av * av));
        auto g = [](double s) { return std::exp(s * s); };
        const QuadResult res = integrate_adaptive(g, std::min(av, bv), std::max(av, bv), inner);
        if (!res.converged || res.error_estimate > inner.target_abs_error)
            throw NonConvergence(res.value, res.error_estimate);
        return Scalar::real(res.value / (std::max(av, bv) - std::min(av, bv)));
    };
}

/// The xe^x walkthrough series: c_ij = 1/(i+j)! for i+j <= order, exact.
inline PowerSeries2D xexp_series(int order = 20) {
    PowerSeries2D s(order);
    Rational factorial(1);
    for (int p = 0; p <= order; ++p) {
        if (p > 0) factorial *= p;
        const Rational c = Rational(1) / factorial;
        for (int i = 0; i <= p; ++i) s.set(i, p - i, Scalar::exact(c));
    }
    return s;
}

inline RunManifest demo_manifest(const std::string& name) {
    RunManifest m;
    m.command = Command::Demo;
    m.demo = name;
    if (name == "dirichlet") {
        m.expr = kDirichletExpr;
        m.criterion = CriterionSelect::All;
        m.mode = Mode::Exact;
        m.pool = dirichlet_pool();
        m.seed = 7;
        m.count = 84; // covers every pool triple once, pairs cycle
        m.min_gap = 0.0;
        m.constant = "1";
    } else if (name == "avg-exp") {
        m.criterion = CriterionSelect::Integrable;
        m.mode = Mode::Float;
        m.seed = 2024;
        m.count = 100;
        m.min_gap = 1e-3;
        m.quad_tol = 1e-10;
        m.constant = "0";
        // DQ of the recovered antiderivative divides two quadrature results
        // by b-a, so the roundtrip budget is looser than the criterion's.
        m.roundtrip_abs_tol = 1e-6;
    } else if (name == "xexp") {
        m.criterion = CriterionSelect::Summation;
        m.mode = Mode::Exact;
        m.seed = 11;
        m.count = 55;
        m.min_gap = 0.0;
        m.constant = "0";
        m.pool = {"0", "1/10", "1/5", "3/10", "2/5", "1/2", "3/5", "7/10", "4/5", "9/10", "1"};
    } else {
        throw DomainError("unknown demo '" + name + "' (expected dirichlet, avg-exp or xexp)");
    }
    return m;
}

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

namespace detail {

struct Problem {
    std::function<Scalar(const Scalar&, const Scalar&)> h; // null if series-only
    std::optional<PowerSeries2D> series;
};

inline Problem resolve_problem(const RunManifest& m) {
    Problem p;
    if (m.command == Command::Demo) {
        if (m.demo == "dirichlet") {
            p.h = as_bivariate(parse_expr(kDirichletExpr, Arity::Bivariate));
        } else if (m.demo == "avg-exp") {
            p.h = average_exp_sq();
        } else if (m.demo == "xexp") {
            p.series = xexp_series();
            const PowerSeries2D& s = *p.series;
            p.h = [s](const Scalar& a, const Scalar& b) { return s.eval(a, b); };
        } else {
            throw DomainError("unknown demo '" + m.demo + "'");
        }
        return p;
    }
    if (!m.series_path.empty()) {
        p.series = PowerSeries2D::load_file(m.series_path, m.mode);
        const PowerSeries2D& s = *p.series;
        p.h = [s](const Scalar& a, const Scalar& b) { return s.eval(a, b); };
        return p;
    }
    if (!m.expr.empty()) {
        p.h = as_bivariate(parse_expr(m.expr, Arity::Bivariate));
        return p;
    }
    throw DomainError("nothing to check: provide --expr or --series");
}

inline SamplingPlan plan_from(const RunManifest& m) {
    SamplingPlan plan;
    plan.seed = m.seed;
    plan.count = m.count;
    plan.min_gap = m.min_gap;
    plan.mode = m.mode;
    for (const auto& text : m.pool)
        plan.exact_pool.push_back(Scalar::parse(text, Mode::Exact));
    return plan;
}

inline Tolerance tolerance_from(const RunManifest& m) { return {m.abs_tol, m.rel_tol}; }

inline Tolerance roundtrip_tolerance_from(const RunManifest& m) {
    return {m.roundtrip_abs_tol.value_or(m.abs_tol), m.roundtrip_rel_tol.value_or(m.rel_tol)};
}

inline int worse_exit(int a, int b) { return std::max(a, b); }

inline int verdict_exit(Verdict v) {
    switch (v) {
    case Verdict::Accept: return 0;
    case Verdict::Reject: return 1;
    default: return 2;
    }
}

// Runs the selected criteria against the problem; appends JSON entries and
// returns the aggregate exit code. The summation profile is handed back for
// recovery.
inline int run_criteria(const RunManifest& m, const Problem& problem, json& criteria_out,
                        std::map<int, Scalar>* profile_out, int* series_order_out) {
    const SamplingPlan plan = plan_from(m);
    const Tolerance tol = tolerance_from(m);
    const QuadratureConfig cfg{m.quad_tol, 4000};
    const bool all = m.criterion == CriterionSelect::All;
    int exit_code = 0;

    auto push = [&](const CriterionReport& rep, json extra = json()) {
        json entry = criterion_report_to_json(rep);
        if (!extra.is_null())
            for (auto& [k, v] : extra.items()) entry[k] = v;
        criteria_out.push_back(entry);
        exit_code = worse_exit(exit_code, verdict_exit(rep.verdict));
    };

    if (all || m.criterion == CriterionSelect::Algebraic) {
        push(run_algebraic(problem.h, plan, tol, AlgebraicVariant::Triple));
        push(run_algebraic(problem.h, plan, tol, AlgebraicVariant::Anchored));
    }
    if (all || m.criterion == CriterionSelect::Matrix) {
        push(run_matrix(problem.h, plan, tol));
    }
    if (m.criterion == CriterionSelect::Integrable || (all && m.mode == Mode::Float)) {
        if (m.mode == Mode::Exact)
            throw ModeError("the integrable criterion runs in float mode only");
        push(run_integrable(problem.h, plan, tol, cfg));
    }
    if (m.criterion == CriterionSelect::Summation || (all && problem.series)) {
        if (!problem.series)
            throw DomainError("the summation criterion needs --series coefficients");
        const SummationResult sum = summation_check(*problem.series, tol);
        json extra;
        json prof = json::array();
        for (const auto& [p, c] : sum.profile) prof.push_back({p, c.str()});
        extra["profile"] = prof;
        extra["absolute_convergence"] =
            convergence_name(absolute_convergence_probe(*problem.series));
        push(sum.report, extra);
        if (profile_out) *profile_out = sum.profile;
        if (series_order_out) *series_order_out = problem.series->order();
    }
    return exit_code;
}

inline RecoveredKind recovery_kind_for(const RunManifest& m) {
    if (m.command == Command::Demo) {
        if (m.demo == "dirichlet") return RecoveredKind::Algebraic;
        if (m.demo == "avg-exp") return RecoveredKind::Integral;
        return RecoveredKind::Series;
    }
    switch (m.criterion) {
    case CriterionSelect::Algebraic:
    case CriterionSelect::Matrix: return RecoveredKind::Algebraic;
    case CriterionSelect::Integrable: return RecoveredKind::Integral;
    case CriterionSelect::Summation: return RecoveredKind::Series;
    default:
        throw DomainError("recovery needs a single criterion, not 'all'");
    }
}

// Evaluation grid for the recovery summary: pool points in exact mode,
// seventeenths-of-unit grid otherwise.
inline std::vector<Scalar> recovery_grid(const RunManifest& m) {
    std::vector<Scalar> xs;
    if (m.mode == Mode::Exact) {
        for (const auto& text : m.pool) xs.push_back(Scalar::parse(text, Mode::Exact));
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    } else {
        for (int k = 0; k <= 16; ++k) xs.push_back(Scalar::real(k / 16.0));
    }
    return xs;
}

inline json recovery_to_json(const RunManifest& m, const RecoveredFunction& f,
                             const std::string& function_file) {
    json j;
    j["kind"] = recovered_kind_name(f.kind());
    j["constant"] = f.constant().str();
    json evals = json::array();
    for (const auto& x : recovery_grid(m)) {
        json e;
        e["x"] = x.str();
        const Scalar fx = f(x);
        e["f"] = fx.str();
        e["x_approx"] = x.to_double();
        e["f_approx"] = fx.to_double();
        evals.push_back(e);
    }
    j["evaluations"] = evals;
    if (const auto* coeffs = f.series_coefficients()) {
        json cs = json::array();
        for (const auto& c : *coeffs) cs.push_back(c.str());
        j["coefficients"] = cs;
    }
    j["function_file"] = function_file.empty() ? json(nullptr) : json(function_file);
    return j;
}

inline std::string function_file_path(const RunManifest& m) {
    return m.out.empty() ? std::string("recovered.fn") : m.out + ".fn";
}

inline void write_function_file(const RunManifest& m, const RecoveredFunction& f,
                                const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write function file '" + path + "'");
    if (f.kind() == RecoveredKind::Series) {
        f.export_series(out);
        return;
    }
    for (const auto& x : recovery_grid(m)) out << x.str() << ' ' << f(x).str() << '\n';
}

inline int run_recovery_and_roundtrip(const RunManifest& m, const Problem& problem,
                                      const std::map<int, Scalar>& profile, int series_order,
                                      json& report) {
    const Scalar C = Scalar::parse(m.constant, m.mode);
    const RecoveredKind kind = recovery_kind_for(m);
    RecoveredFunction f = [&] {
        switch (kind) {
        case RecoveredKind::Algebraic: return recover_algebraic(problem.h, C);
        case RecoveredKind::Integral:
            return recover_integral(problem.h, C, QuadratureConfig{m.quad_tol, 4000});
        default: return recover_series(profile, C, series_order);
        }
    }();

    const std::string fn_path = function_file_path(m);
    write_function_file(m, f, fn_path);
    report["recovery"] = recovery_to_json(m, f, fn_path);

    const CriterionReport rt = roundtrip_check(
        problem.h, [&f](const Scalar& x) { return f(x); }, plan_from(m),
        roundtrip_tolerance_from(m));
    report["roundtrip"] = criterion_report_to_json(rt);
    return verdict_exit(rt.verdict);
}

inline RunOutcome run_check_like(const RunManifest& m, bool with_recovery) {
    if (with_recovery) (void)recovery_kind_for(m); // reject 'all' before any work
    const Problem problem = resolve_problem(m);
    json report;
    report["tool"] = "dqkit";
    report["manifest"] = manifest_to_json(m);
    report["criteria"] = json::array();
    report["recovery"] = nullptr;
    report["roundtrip"] = nullptr;

    std::map<int, Scalar> profile;
    int series_order = 0;
    int exit_code =
        run_criteria(m, problem, report["criteria"], &profile, &series_order);

    if (with_recovery) {
        if (exit_code == 0) {
            exit_code = worse_exit(
                exit_code,
                run_recovery_and_roundtrip(m, problem, profile, series_order, report));
        }
        // A rejected or inconclusive H yields no function artifact.
    }
    return {exit_code, std::move(report)};
}

inline RunOutcome run_verify(const RunManifest& m) {
    if (m.expr.empty()) throw DomainError("verify needs --expr with a univariate f");
    auto f = as_univariate(parse_expr(m.expr, Arity::Univariate));
    std::function<Scalar(const Scalar&)> df;
    if (!m.derivative_expr.empty())
        df = as_univariate(parse_expr(m.derivative_expr, Arity::Univariate));

    Problem problem;
    problem.h = df ? dq_of(f, df) : dq_of(f);

    json report;
    report["tool"] = "dqkit";
    report["manifest"] = manifest_to_json(m);
    report["criteria"] = json::array();
    report["recovery"] = nullptr;
    report["roundtrip"] = nullptr;

    // The integrable criterion touches the diagonal, so it needs f'.
    RunManifest adjusted = m;
    if (adjusted.criterion == CriterionSelect::Summation)
        throw DomainError("verify supports algebraic, matrix and integrable criteria");
    if (adjusted.criterion == CriterionSelect::Integrable && !df)
        throw DomainError("the integrable criterion on DQ_f needs --dexpr");

    int exit_code = 0;
    if (adjusted.criterion == CriterionSelect::All && !df) {
        // Without a derivative run the diagonal-free criteria only.
        RunManifest alg = adjusted;
        alg.criterion = CriterionSelect::Algebraic;
        exit_code = run_criteria(alg, problem, report["criteria"], nullptr, nullptr);
        alg.criterion = CriterionSelect::Matrix;
        exit_code = worse_exit(
            exit_code, run_criteria(alg, problem, report["criteria"], nullptr, nullptr));
    } else {
        exit_code = run_criteria(adjusted, problem, report["criteria"], nullptr, nullptr);
    }

    if (df && m.mode == Mode::Float) {
        const CriterionReport partials =
            partials_identity_check(f, df, plan_from(m), m.step, tolerance_from(m));
        report["criteria"].push_back(criterion_report_to_json(partials));
        exit_code = worse_exit(exit_code, verdict_exit(partials.verdict));
    }
    return {exit_code, std::move(report)};
}

} // namespace detail

/// Executes a manifest and returns the exit code (0 accept, 1 reject,
/// 2 inconclusive) plus the structured report. Usage-level failures
/// (bad expressions, missing files, infeasible plans) throw dq::Error;
/// the CLI maps those to exit 3.
inline RunOutcome run_manifest(const RunManifest& m) {
    switch (m.command) {
    case Command::Check: return detail::run_check_like(m, /*with_recovery=*/false);
    case Command::Recover: return detail::run_check_like(m, /*with_recovery=*/true);
    case Command::Verify: return detail::run_verify(m);
    case Command::Demo: return detail::run_check_like(m, /*with_recovery=*/true);
    }
    throw DomainError("unknown command");
}

inline std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

} // namespace dq
