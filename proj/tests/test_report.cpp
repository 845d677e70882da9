#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "test_helpers.hpp"

using namespace dq;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(std::string p, const std::string& contents) : path(std::move(p)) {
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("manifest JSON round trip") {
    RunManifest m;
    m.command = Command::Recover;
    m.expr = "(b^2-a^2)/(b-a)";
    m.criterion = CriterionSelect::Matrix;
    m.mode = Mode::Exact;
    m.pool = {"0", "1/2", "1/2*sqrt2", "1"};
    m.seed = 987654321;
    m.count = 17;
    m.min_gap = 0.0;
    m.abs_tol = 1e-8;
    m.rel_tol = 1e-7;
    m.quad_tol = 1e-11;
    m.constant = "1/4";
    m.out = "report.json";
    m.roundtrip_abs_tol = 1e-5;
    m.step = 2e-4;
    m.timing = true;

    const RunManifest r = manifest_from_json(manifest_to_json(m));
    CHECK(r.command == m.command);
    CHECK(r.expr == m.expr);
    CHECK(r.criterion == m.criterion);
    CHECK(r.mode == m.mode);
    CHECK(r.pool == m.pool);
    CHECK(r.seed == m.seed);
    CHECK(r.count == m.count);
    CHECK(r.min_gap == m.min_gap);
    CHECK(r.abs_tol == m.abs_tol);
    CHECK(r.rel_tol == m.rel_tol);
    CHECK(r.quad_tol == m.quad_tol);
    CHECK(r.constant == m.constant);
    CHECK(r.out == m.out);
    CHECK(r.roundtrip_abs_tol == m.roundtrip_abs_tol);
    CHECK_FALSE(r.roundtrip_rel_tol.has_value());
    CHECK(r.step == m.step);
    CHECK(r.timing == m.timing);
    CHECK(manifest_to_json(r) == manifest_to_json(m));
}

TEST_CASE("check command verdicts and exit codes") {
    RunManifest reject;
    reject.command = Command::Check;
    reject.expr = "a*b";
    reject.criterion = CriterionSelect::Algebraic;
    const RunOutcome out = run_manifest(reject);
    CHECK(out.exit_code == 1);
    REQUIRE(out.report.at("criteria").size() == 2);
    CHECK(out.report.at("criteria").at(0).at("verdict") == "reject");
    CHECK_FALSE(out.report.at("criteria").at(0).at("witness").is_null());

    RunManifest accept = reject;
    accept.expr = "a+b";
    accept.criterion = CriterionSelect::All;
    const RunOutcome ok = run_manifest(accept);
    CHECK(ok.exit_code == 0);
    CHECK(ok.report.at("criteria").size() == 4); // triple, anchored, matrix, integrable

    // ln(a-b) faults on every pair (a < b), so no verdict can be earned.
    RunManifest inconclusive = reject;
    inconclusive.expr = "ln(a-b)";
    inconclusive.criterion = CriterionSelect::Integrable;
    inconclusive.count = 6;
    const RunOutcome inc = run_manifest(inconclusive);
    CHECK(inc.exit_code == 2);

    RunManifest garbage = reject;
    garbage.expr = "(((";
    CHECK_THROWS_AS(run_manifest(garbage), SyntaxError);

    RunManifest nothing;
    nothing.command = Command::Check;
    CHECK_THROWS_AS(run_manifest(nothing), DomainError);
}

TEST_CASE("summation through a series file") {
    std::string contents;
    double factorial = 1.0;
    for (int p = 0; p <= 12; ++p) {
        if (p > 0) factorial *= p;
        for (int i = 0; i <= p; ++i)
            contents += std::to_string(i) + " " + std::to_string(p - i) + " 1/" +
                        std::to_string((long long)factorial) + "\n";
    }
    const TempFile file("test_series_tmp.coeffs", contents);

    RunManifest m;
    m.command = Command::Check;
    m.series_path = file.path;
    m.criterion = CriterionSelect::Summation;
    m.mode = Mode::Exact;
    const RunOutcome out = run_manifest(m);
    CHECK(out.exit_code == 0);
    const auto& entry = out.report.at("criteria").at(0);
    CHECK(entry.at("criterion") == "summation");
    CHECK(entry.at("absolute_convergence") == "plausible");
    CHECK(entry.at("profile").at(2).at(1) == "1/2");
}

TEST_CASE("recover command produces a function file and roundtrip") {
    RunManifest m;
    m.command = Command::Recover;
    m.expr = "a+b";
    m.criterion = CriterionSelect::Algebraic;
    m.constant = "0";
    m.out = "test_recover_tmp.json";
    const RunOutcome out = run_manifest(m);
    CHECK(out.exit_code == 0);
    CHECK(out.report.at("recovery").at("kind") == "algebraic");
    CHECK(out.report.at("roundtrip").at("verdict") == "accept");
    const std::string fn = out.report.at("recovery").at("function_file").get<std::string>();
    std::ifstream check(fn);
    CHECK(check.good());
    std::remove(fn.c_str());

    // Rejected inputs produce no artifact.
    RunManifest bad = m;
    bad.expr = "a*b";
    bad.out = "test_recover_bad.json";
    const RunOutcome rej = run_manifest(bad);
    CHECK(rej.exit_code == 1);
    CHECK(rej.report.at("recovery").is_null());
    std::ifstream missing("test_recover_bad.json.fn");
    CHECK_FALSE(missing.good());

    RunManifest all = m;
    all.criterion = CriterionSelect::All;
    CHECK_THROWS_AS(run_manifest(all), DomainError);
}

TEST_CASE("verify command on f = x^3") {
    RunManifest m;
    m.command = Command::Verify;
    m.expr = "x^3";
    m.derivative_expr = "3*x^2";
    m.criterion = CriterionSelect::All;
    m.count = 32;
    const RunOutcome out = run_manifest(m);
    CHECK(out.exit_code == 0);
    bool saw_partials = false;
    for (const auto& entry : out.report.at("criteria"))
        if (entry.at("criterion") == "partials-identity") {
            saw_partials = true;
            CHECK(entry.at("verdict") == "accept");
        }
    CHECK(saw_partials);

    RunManifest plain = m;
    plain.derivative_expr.clear();
    const RunOutcome noderiv = run_manifest(plain);
    CHECK(noderiv.exit_code == 0);
    for (const auto& entry : noderiv.report.at("criteria"))
        CHECK(entry.at("criterion") != "integrable");

    RunManifest needs = m;
    needs.derivative_expr.clear();
    needs.criterion = CriterionSelect::Integrable;
    CHECK_THROWS_AS(run_manifest(needs), DomainError);
}

TEST_CASE("demos are deterministic at the library level") {
    for (const char* name : {"dirichlet", "xexp"}) {
        const RunManifest m = demo_manifest(name);
        const RunOutcome first = run_manifest(m);
        const RunOutcome second = run_manifest(m);
        CHECK(first.exit_code == 0);
        CHECK(dump_report(first.report) == dump_report(second.report));
        std::remove("recovered.fn");
    }
    CHECK_THROWS_AS(demo_manifest("nope"), DomainError);
}

TEST_CASE("dirichlet demo reproduces the worked example") {
    const RunOutcome out = run_manifest(demo_manifest("dirichlet"));
    CHECK(out.exit_code == 0);
    for (const auto& entry : out.report.at("criteria")) {
        CHECK(entry.at("verdict") == "accept");
        CHECK(entry.at("all_residuals_zero") == true);
        CHECK(entry.at("max_residual") == 0.0);
    }
    // Rational pool points recover 1, irrational ones 0.
    for (const auto& e : out.report.at("recovery").at("evaluations")) {
        const std::string x = e.at("x").get<std::string>();
        const bool irrational = x.find("sqrt2") != std::string::npos;
        CHECK(e.at("f").get<std::string>() == (irrational ? "0" : "1"));
    }
    CHECK(out.report.at("roundtrip").at("all_residuals_zero") == true);
    std::remove("recovered.fn");
}

TEST_CASE("report round trip reproduces the run") {
    RunManifest m;
    m.command = Command::Check;
    m.expr = "a^2+a*b+b^2";
    m.criterion = CriterionSelect::All;
    m.seed = 31;
    m.count = 40;
    const RunOutcome first = run_manifest(m);
    const RunManifest replay = manifest_from_json(first.report.at("manifest"));
    const RunOutcome second = run_manifest(replay);
    CHECK(first.exit_code == second.exit_code);
    CHECK(dump_report(first.report) == dump_report(second.report));
}
