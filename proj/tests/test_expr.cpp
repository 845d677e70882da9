#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace dq;

namespace {

bool pred_equal(const Pred& x, const Pred& y);

bool expr_equal(const Expr& x, const Expr& y) {
    if (x.kind != y.kind) return false;
    switch (x.kind) {
    case ExprKind::Constant: return x.const_rat == y.const_rat && x.const_surd == y.const_surd;
    case ExprKind::Variable: return x.var == y.var;
    case ExprKind::Pow: return x.exponent == y.exponent && expr_equal(*x.lhs, *y.lhs);
    case ExprKind::Neg: return expr_equal(*x.lhs, *y.lhs);
    case ExprKind::Call: return x.callee == y.callee && expr_equal(*x.lhs, *y.lhs);
    case ExprKind::Piecewise:
        if (x.branches.size() != y.branches.size()) return false;
        for (std::size_t i = 0; i < x.branches.size(); ++i)
            if (!pred_equal(*x.branches[i].guard, *y.branches[i].guard) ||
                !expr_equal(*x.branches[i].value, *y.branches[i].value))
                return false;
        return true;
    default: return expr_equal(*x.lhs, *y.lhs) && expr_equal(*x.rhs, *y.rhs);
    }
}

bool pred_equal(const Pred& x, const Pred& y) {
    if (x.kind != y.kind) return false;
    switch (x.kind) {
    case PredKind::True: return true;
    case PredKind::IsRational: return x.var == y.var;
    case PredKind::Not: return pred_equal(*x.lhs_pred, *y.lhs_pred);
    case PredKind::And:
    case PredKind::Or:
        return pred_equal(*x.lhs_pred, *y.lhs_pred) && pred_equal(*x.rhs_pred, *y.rhs_pred);
    default:
        return expr_equal(*x.lhs_expr, *y.lhs_expr) && expr_equal(*x.rhs_expr, *y.rhs_expr);
    }
}

const char* kDirichletSpelled =
    "piecewise{ rat(a) && rat(b) : 0 ; !rat(a) && !rat(b) : 0 ; "
    "!rat(a) : 1/(b-a) ; true : -1/(b-a) }";

// Random polynomial AST over the given variable, exact-representable constants.
ExprPtr random_poly(dqtest::TestRng& rng, char var, int depth) {
    const auto pick = rng.integer(depth <= 0 ? 2 : 6);
    switch (pick) {
    case 0: return ast::constant(Rational((long)rng.integer(9) - 4, 1 + (long)rng.integer(4)));
    case 1: return ast::variable(var);
    case 2: return ast::binary(ExprKind::Add, random_poly(rng, var, depth - 1),
                               random_poly(rng, var, depth - 1));
    case 3: return ast::binary(ExprKind::Sub, random_poly(rng, var, depth - 1),
                               random_poly(rng, var, depth - 1));
    case 4: return ast::binary(ExprKind::Mul, random_poly(rng, var, depth - 1),
                               random_poly(rng, var, depth - 1));
    default: return ast::pow(random_poly(rng, var, depth - 1), (int)rng.integer(4));
    }
}

} // namespace

TEST_CASE("parsing builds the expected shapes") {
    const ExprAst ast = parse_expr("(b^2-a^2)/(b-a)", Arity::Bivariate);
    REQUIRE(ast.root->kind == ExprKind::Div);
    REQUIRE(ast.root->lhs->kind == ExprKind::Sub);
    CHECK(ast.root->lhs->lhs->kind == ExprKind::Pow);
    CHECK(ast.root->lhs->lhs->exponent == 2);
    CHECK(ast.root->rhs->kind == ExprKind::Sub);
    CHECK(ast.pretty() == "(b^2-a^2)/(b-a)");

    const ExprAst pw = parse_expr(kDirichletSpelled, Arity::Bivariate);
    REQUIRE(pw.root->kind == ExprKind::Piecewise);
    REQUIRE(pw.root->branches.size() == 4);
    CHECK(pw.root->branches[0].guard->kind == PredKind::And);
    CHECK(pw.root->branches[1].guard->lhs_pred->kind == PredKind::Not);
    CHECK(pw.root->branches[3].guard->kind == PredKind::True);
}

TEST_CASE("parse errors carry positions") {
    try {
        parse_expr("x*q", Arity::Univariate);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.position == 2);
    }
    CHECK_THROWS_AS(parse_expr("a+b", Arity::Univariate), ArityError);
    CHECK_THROWS_AS(parse_expr("x", Arity::Bivariate), ArityError);
    CHECK_THROWS_AS(parse_expr("", Arity::Bivariate), SyntaxError);
    CHECK_THROWS_AS(parse_expr("(((", Arity::Bivariate), SyntaxError);
    CHECK_THROWS_AS(parse_expr("a^-2", Arity::Bivariate), SyntaxError);
    CHECK_THROWS_AS(parse_expr("a^(2)", Arity::Bivariate), SyntaxError);
    CHECK_THROWS_AS(parse_expr("a^1/2", Arity::Bivariate), SyntaxError);
    CHECK_THROWS_AS(parse_expr("foo(a)", Arity::Bivariate), SyntaxError);
    CHECK_THROWS_AS(parse_expr("a+", Arity::Bivariate), SyntaxError);
    CHECK_THROWS_AS(parse_expr("a b", Arity::Bivariate), SyntaxError);
    CHECK_THROWS_AS(parse_expr("piecewise{}", Arity::Bivariate), SyntaxError);
    CHECK_THROWS_AS(parse_expr("a = b", Arity::Bivariate), SyntaxError);
}

TEST_CASE("evaluation matches the worked cases") {
    const auto H = as_bivariate(parse_expr("(b^2-a^2)/(b-a)", Arity::Bivariate));
    CHECK(H(Scalar::real(0.25), Scalar::real(0.75)).value() == 1.0);

    // Dirichlet-style H at a = 1/2, b = sqrt2/2 lands in the 'a rational,
    // b irrational' branch: -1/(b-a) = -2-2*sqrt2.
    const auto Hd = as_bivariate(parse_expr(kDirichletSpelled, Arity::Bivariate));
    const Scalar got = Hd(Scalar::exact(Rational(1, 2)), Scalar::exact(0, Rational(1, 2)));
    CHECK(got == Scalar::exact(-2, Rational(-2)));

    const auto He = as_bivariate(parse_expr("exp(a*b)", Arity::Bivariate));
    CHECK_THROWS_AS(He(Scalar::exact(1), Scalar::exact(1)), ModeError);
    CHECK(He(Scalar::real(0.0), Scalar::real(0.7)).value() == 1.0);
}

TEST_CASE("piecewise guards evaluate lazily and in order") {
    const auto H = as_bivariate(parse_expr("piecewise{a<1/2:1;true:1/(b-b)}", Arity::Bivariate));
    CHECK(H(Scalar::real(0.25), Scalar::real(0.5)).value() == 1.0);
    CHECK_THROWS_AS(H(Scalar::real(0.75), Scalar::real(0.9)), DivisionByZero);

    const auto empty = as_bivariate(parse_expr("piecewise{a<0:1}", Arity::Bivariate));
    CHECK_THROWS_AS(empty(Scalar::real(0.5), Scalar::real(0.6)), NoBranchMatched);

    const auto ratguard = as_bivariate(parse_expr("piecewise{rat(a):1;true:0}", Arity::Bivariate));
    CHECK_THROWS_AS(ratguard(Scalar::real(0.5), Scalar::real(0.6)), ModeError);
    CHECK(ratguard(Scalar::exact(Rational(1, 2)), Scalar::exact(1)) == Scalar::exact(1));
}

TEST_CASE("float-only calls and domain faults") {
    const auto f = as_univariate(parse_expr("ln(x)", Arity::Univariate));
    CHECK_THROWS_AS(f(Scalar::real(0.0)), EvalError);
    CHECK_THROWS_AS(f(Scalar::real(-1.0)), EvalError);
    const auto g = as_univariate(parse_expr("sqrt(x)", Arity::Univariate));
    CHECK_THROWS_AS(g(Scalar::real(-1.0)), EvalError);
    CHECK(g(Scalar::real(4.0)).value() == 2.0);
}

TEST_CASE("pretty-print round trip is a fixpoint") {
    const char* sources[] = {
        "(b^2-a^2)/(b-a)",
        "a+b",
        "a*b",
        "5",
        "a^2+a*b+b^2",
        "-a^2",
        "a*-b",
        "1/2*sqrt2+a",
        "sqrt2^2",
        "exp(a*b)-sin(a)+cos(b)",
        "piecewise{a<1/2:1;true:1/(b-b)}",
        kDirichletSpelled,
        "piecewise{rat(a)||!rat(b)&&a<b:a;a==b:0;true:b}",
        "1/(b-a)",
        "(a+b)^3",
        "a-(b-a)",
        "a-b-a",
    };
    for (const char* src : sources) {
        const ExprAst first = parse_expr(src, Arity::Bivariate);
        const std::string printed = first.pretty();
        const ExprAst second = parse_expr(printed, Arity::Bivariate);
        CHECK(expr_equal(*first.root, *second.root));
        CHECK(second.pretty() == printed);
    }
}

TEST_CASE("exact and float evaluation agree on polynomials") {
    dqtest::TestRng rng(31337);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const ExprAst ast{Arity::Univariate, random_poly(rng, 'x', 3)};
        for (int k = 0; k <= 8; ++k) {
            // Dyadic points are exactly representable in both modes.
            const Scalar xe = Scalar::exact(Rational(k, 8));
            const Scalar xf = Scalar::real(k / 8.0);
            const Scalar ve = evaluate(ast, Bindings::univariate(xe));
            const Scalar vf = evaluate(ast, Bindings::univariate(xf));
            const double ref = std::abs(ve.to_double());
            CHECK(std::abs(ve.to_double() - vf.value()) <= 1e-12 * std::max(1.0, ref));
            ++checked;
        }
    }
    CHECK(checked == 60 * 9);
}

TEST_CASE("generated ASTs survive the printer") {
    dqtest::TestRng rng(777);
    for (int trial = 0; trial < 80; ++trial) {
        const ExprAst ast{Arity::Univariate, random_poly(rng, 'x', 3)};
        const std::string printed = ast.pretty();
        const ExprAst reparsed = parse_expr(printed, Arity::Univariate);
        CHECK(reparsed.pretty() == printed);
        // Values agree at a probe point even when negative literals re-associate.
        const Scalar x = Scalar::exact(Rational(3, 7));
        CHECK(evaluate(ast, Bindings::univariate(x)) ==
              evaluate(reparsed, Bindings::univariate(x)));
    }
}
