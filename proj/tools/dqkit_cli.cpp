// dqkit command line: decides whether H(a,b) is a difference quotient and
// reconstructs the underlying f. Exit codes: 0 accept, 1 reject,
// 2 inconclusive, 3 usage or parse error.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include "dqkit/dqkit.hpp"

namespace {

void add_common_options(CLI::App* cmd, dq::RunManifest& m, std::string& criterion,
                        std::string& mode, std::string& pool_csv) {
    cmd->add_option("--criterion", criterion,
                    "criterion to run: algebraic|matrix|integrable|summation|all");
    cmd->add_option("--mode", mode, "scalar mode: float|exact");
    cmd->add_option("--pool", pool_csv, "comma-separated exact scalars for exact mode");
    cmd->add_option("--seed", m.seed, "sampling seed");
    cmd->add_option("--count", m.count, "number of sampled pairs/triples");
    cmd->add_option("--min-gap", m.min_gap, "smallest allowed gap between sample points");
    cmd->add_option("--abs-tol", m.abs_tol, "absolute residual tolerance");
    cmd->add_option("--rel-tol", m.rel_tol, "relative residual tolerance");
    cmd->add_option("--quad-tol", m.quad_tol, "quadrature absolute error target");
    cmd->add_option("--constant", m.constant, "recovery constant C");
    cmd->add_option("--out", m.out, "report path (default: stdout)");
    cmd->add_flag("--timing", m.timing, "include wall_time_ms in the report");
}

void apply_common(dq::RunManifest& m, const std::string& criterion, const std::string& mode,
                  const std::string& pool_csv) {
    m.criterion = dq::select_from_name(criterion);
    if (mode == "float") {
        m.mode = dq::Mode::Float;
    } else if (mode == "exact") {
        m.mode = dq::Mode::Exact;
    } else {
        throw dq::DomainError("unknown mode '" + mode + "' (expected float or exact)");
    }
    m.pool.clear();
    std::size_t start = 0;
    while (start <= pool_csv.size() && !pool_csv.empty()) {
        const std::size_t comma = pool_csv.find(',', start);
        const std::string item =
            pool_csv.substr(start, comma == std::string::npos ? std::string::npos
                                                              : comma - start);
        if (!item.empty()) m.pool.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
}

int emit(const dq::RunOutcome& outcome, const dq::RunManifest& m,
         std::chrono::steady_clock::time_point started) {
    dq::json report = outcome.report;
    if (m.timing) {
        const auto elapsed = std::chrono::steady_clock::now() - started;
        report["wall_time_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    }
    const std::string text = dq::dump_report(report);
    if (m.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(m.out, std::ios::binary);
        if (!out) {
            std::cerr << "dqkit: cannot write report to '" << m.out << "'\n";
            return 3;
        }
        out << text;
    }
    return outcome.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"difference-quotient recognition and recovery toolkit"};
    app.require_subcommand(1);

    dq::RunManifest manifest;
    std::string criterion = "algebraic";
    std::string mode = "float";
    std::string pool_csv;
    std::string demo_name;

    auto* check = app.add_subcommand("check", "test whether H is a difference quotient");
    check->add_option("--expr", manifest.expr, "bivariate H(a,b) expression");
    check->add_option("--series", manifest.series_path, "power series coefficient file");
    add_common_options(check, manifest, criterion, mode, pool_csv);

    auto* recover = app.add_subcommand("recover", "check H, then reconstruct f");
    recover->add_option("--expr", manifest.expr, "bivariate H(a,b) expression");
    recover->add_option("--series", manifest.series_path, "power series coefficient file");
    recover->add_option("--roundtrip-abs-tol",
                        [&manifest](const std::vector<std::string>& v) {
                            manifest.roundtrip_abs_tol = std::stod(v.front());
                            return true;
                        },
                        "absolute tolerance for the roundtrip check");
    recover->add_option("--roundtrip-rel-tol",
                        [&manifest](const std::vector<std::string>& v) {
                            manifest.roundtrip_rel_tol = std::stod(v.front());
                            return true;
                        },
                        "relative tolerance for the roundtrip check");
    add_common_options(recover, manifest, criterion, mode, pool_csv);

    auto* verify = app.add_subcommand("verify", "build DQ_f from f and test it");
    verify->add_option("--expr", manifest.expr, "univariate f(x) expression");
    verify->add_option("--dexpr", manifest.derivative_expr, "derivative f'(x) expression");
    verify->add_option("--step", manifest.step, "finite-difference step for the partials check");
    add_common_options(verify, manifest, criterion, mode, pool_csv);

    auto* demo = app.add_subcommand("demo", "run a built-in walkthrough end to end");
    demo->add_option("name", demo_name, "dirichlet | avg-exp | xexp")->required();
    demo->add_option("--out", manifest.out, "report path (default: stdout)");
    demo->add_flag("--timing", manifest.timing, "include wall_time_ms in the report");

    auto* replay = app.add_subcommand("replay", "re-run the manifest embedded in a report");
    std::string replay_path;
    replay->add_option("report", replay_path, "report or manifest JSON file")->required();

    const auto started = std::chrono::steady_clock::now();
    try {
        app.parse(argc, argv);

        if (demo->parsed()) {
            dq::RunManifest m = dq::demo_manifest(demo_name);
            m.out = manifest.out;
            m.timing = manifest.timing;
            return emit(dq::run_manifest(m), m, started);
        }
        if (replay->parsed()) {
            std::ifstream in(replay_path);
            if (!in) throw dq::DomainError("cannot open '" + replay_path + "'");
            dq::json j = dq::json::parse(in);
            dq::RunManifest m =
                dq::manifest_from_json(j.contains("manifest") ? j.at("manifest") : j);
            return emit(dq::run_manifest(m), m, started);
        }

        apply_common(manifest, criterion, mode, pool_csv);
        if (check->parsed()) manifest.command = dq::Command::Check;
        if (recover->parsed()) manifest.command = dq::Command::Recover;
        if (verify->parsed()) manifest.command = dq::Command::Verify;
        return emit(dq::run_manifest(manifest), manifest, started);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 3;
    } catch (const dq::Error& e) {
        std::cerr << "dqkit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "dqkit: internal error: " << e.what() << "\n";
        return 3;
    }
}
