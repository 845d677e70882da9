#pragma once

#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqkit/scalar.hpp"

namespace dq {

enum class Arity { Univariate, Bivariate };

enum class ExprKind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Call, Piecewise };
enum class PredKind { True, IsRational, Lt, Le, Eq, And, Or, Not };

struct Expr;
struct Pred;
using ExprPtr = std::shared_ptr<const Expr>;
using PredPtr = std::shared_ptr<const Pred>;

struct PiecewiseBranch {
    PredPtr guard;
    ExprPtr value;
};

/// One node of a parsed expression. Constants live in Q(sqrt2) so that a
/// literal evaluates exactly in exact mode and as a double in float mode.
struct Expr {
    ExprKind kind;
    Rational const_rat;   // Constant: rational part
    Rational const_surd;  // Constant: sqrt2 coefficient
    char var = 0;         // Variable: 'a', 'b' or 'x'
    ExprPtr lhs, rhs;     // binary nodes; Neg, Pow and Call use lhs only
    int exponent = 0;     // Pow
    std::string callee;   // Call
    std::vector<PiecewiseBranch> branches;
};

struct Pred {
    PredKind kind;
    char var = 0;               // IsRational
    ExprPtr lhs_expr, rhs_expr; // comparisons
    PredPtr lhs_pred, rhs_pred; // logicals; Not uses lhs_pred
};

struct ExprAst {
    Arity arity;
    ExprPtr root;
    std::string pretty() const;
};

namespace ast {

inline ExprPtr constant(Rational q, Rational r = Rational(0)) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Constant;
    e->const_rat = std::move(q);
    e->const_surd = std::move(r);
    return e;
}
inline ExprPtr variable(char v) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Variable;
    e->var = v;
    return e;
}
inline ExprPtr binary(ExprKind k, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}
inline ExprPtr neg(ExprPtr operand) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Neg;
    e->lhs = std::move(operand);
    return e;
}
inline ExprPtr pow(ExprPtr base, int exponent) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Pow;
    e->lhs = std::move(base);
    e->exponent = exponent;
    return e;
}
inline ExprPtr call(std::string name, ExprPtr arg) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Call;
    e->callee = std::move(name);
    e->lhs = std::move(arg);
    return e;
}
inline ExprPtr piecewise(std::vector<PiecewiseBranch> branches) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Piecewise;
    e->branches = std::move(branches);
    return e;
}

} // namespace ast

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace detail {

enum class Tok {
    Number, Ident,
    Plus, Minus, Star, Slash, Caret,
    LParen, RParen, LBrace, RBrace,
    Semicolon, Colon,
    Lt, Le, Eq, AndAnd, OrOr, Bang,
    End
};

struct Token {
    Tok kind = Tok::End;
    std::size_t pos = 0;
    Rational number;        // Tok::Number
    bool plain_int = false; // written as bare digits (valid as an exponent)
    std::string text;       // Tok::Ident
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
        tok_ = Token{};
        tok_.pos = i_;
        if (i_ >= src_.size()) {
            tok_.kind = Tok::End;
            return;
        }
        const char c = src_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                ++j;
            tok_.kind = Tok::Ident;
            tok_.text = std::string(src_.substr(i_, j - i_));
            i_ = j;
            return;
        }
        switch (c) {
        case '+': tok_.kind = Tok::Plus; ++i_; return;
        case '-': tok_.kind = Tok::Minus; ++i_; return;
        case '*': tok_.kind = Tok::Star; ++i_; return;
        case '/': tok_.kind = Tok::Slash; ++i_; return;
        case '^': tok_.kind = Tok::Caret; ++i_; return;
        case '(': tok_.kind = Tok::LParen; ++i_; return;
        case ')': tok_.kind = Tok::RParen; ++i_; return;
        case '{': tok_.kind = Tok::LBrace; ++i_; return;
        case '}': tok_.kind = Tok::RBrace; ++i_; return;
        case ';': tok_.kind = Tok::Semicolon; ++i_; return;
        case ':': tok_.kind = Tok::Colon; ++i_; return;
        case '!': tok_.kind = Tok::Bang; ++i_; return;
        case '<':
            ++i_;
            if (i_ < src_.size() && src_[i_] == '=') {
                tok_.kind = Tok::Le;
                ++i_;
            } else {
                tok_.kind = Tok::Lt;
            }
            return;
        case '=':
            if (i_ + 1 < src_.size() && src_[i_ + 1] == '=') {
                tok_.kind = Tok::Eq;
                i_ += 2;
                return;
            }
            throw SyntaxError("unexpected '=' (did you mean '==')", i_);
        case '&':
            if (i_ + 1 < src_.size() && src_[i_ + 1] == '&') {
                tok_.kind = Tok::AndAnd;
                i_ += 2;
                return;
            }
            throw SyntaxError("unexpected '&' (did you mean '&&')", i_);
        case '|':
            if (i_ + 1 < src_.size() && src_[i_ + 1] == '|') {
                tok_.kind = Tok::OrOr;
                i_ += 2;
                return;
            }
            throw SyntaxError("unexpected '|' (did you mean '||')", i_);
        default:
            throw SyntaxError(std::string("unexpected character '") + c + "'", i_);
        }
    }

    void lex_number() {
        const std::size_t start = i_;
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
        bool decimal = false;
        if (i_ < src_.size() && src_[i_] == '.') {
            decimal = true;
            ++i_;
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
        }
        if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
            std::size_t j = i_ + 1;
            if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
            if (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) {
                decimal = true;
                i_ = j;
                while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
            }
        }
        bool fraction = false;
        if (!decimal && i_ + 1 < src_.size() && src_[i_] == '/' &&
            std::isdigit(static_cast<unsigned char>(src_[i_ + 1]))) {
            // Rational literal p/q: only when the digits follow the slash
            // immediately, otherwise '/' stays a division operator.
            fraction = true;
            ++i_;
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
        }
        auto text = src_.substr(start, i_ - start);
        auto value = parse_rational_literal(text);
        if (!value) throw SyntaxError("malformed number literal", start);
        tok_.kind = Tok::Number;
        tok_.pos = start;
        tok_.number = std::move(*value);
        tok_.plain_int = !decimal && !fraction;
    }

    std::string_view src_;
    std::size_t i_ = 0;
    Token tok_;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    Parser(std::string_view src, Arity arity) : lex_(src), arity_(arity) {}

    ExprPtr parse_toplevel() {
        ExprPtr e = parse_expr();
        if (lex_.peek().kind != Tok::End)
            throw SyntaxError("unexpected trailing input", lex_.peek().pos);
        return e;
    }

private:
    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            const bool add = lex_.take().kind == Tok::Plus;
            e = ast::binary(add ? ExprKind::Add : ExprKind::Sub, e, parse_term());
        }
        return e;
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
            const bool mul = lex_.take().kind == Tok::Star;
            e = ast::binary(mul ? ExprKind::Mul : ExprKind::Div, e, parse_factor());
        }
        return e;
    }

    ExprPtr parse_factor() {
        bool negate = false;
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            negate = true;
        }
        ExprPtr e = parse_atom();
        if (lex_.peek().kind == Tok::Caret) {
            const auto caret = lex_.take();
            const auto t = lex_.peek();
            if (t.kind != Tok::Number || !t.plain_int)
                throw SyntaxError("exponent must be a nonnegative integer literal",
                                  t.kind == Tok::End ? caret.pos + 1 : t.pos);
            lex_.take();
            if (t.number > Rational(1 << 20))
                throw SyntaxError("exponent too large", t.pos);
            e = ast::pow(e, static_cast<int>(numerator(t.number).convert_to<long>()));
        }
        return negate ? ast::neg(e) : e;
    }

    ExprPtr parse_atom() {
        const Token t = lex_.peek();
        switch (t.kind) {
        case Tok::Number:
            lex_.take();
            return ast::constant(t.number);
        case Tok::LParen: {
            lex_.take();
            ExprPtr e = parse_expr();
            expect(Tok::RParen, "expected ')'");
            return e;
        }
        case Tok::Ident:
            return parse_ident_atom();
        default:
            throw SyntaxError("expected a number, variable, function call or '('", t.pos);
        }
    }

    ExprPtr parse_ident_atom() {
        const Token t = lex_.take();
        const std::string& id = t.text;
        if (id == "sqrt2") return ast::constant(Rational(0), Rational(1));
        if (id == "piecewise") return parse_piecewise(t.pos);
        if (id == "exp" || id == "sin" || id == "cos" || id == "ln" || id == "sqrt") {
            expect(Tok::LParen, "expected '(' after function name");
            ExprPtr arg = parse_expr();
            expect(Tok::RParen, "expected ')'");
            return ast::call(id, arg);
        }
        if (id.size() == 1 && (id[0] == 'a' || id[0] == 'b' || id[0] == 'x')) {
            check_variable(id[0], t.pos);
            return ast::variable(id[0]);
        }
        throw SyntaxError("unknown identifier '" + id + "'", t.pos);
    }

    ExprPtr parse_piecewise(std::size_t pos) {
        expect(Tok::LBrace, "expected '{' after 'piecewise'");
        std::vector<PiecewiseBranch> branches;
        for (;;) {
            PredPtr guard = parse_pred();
            expect(Tok::Colon, "expected ':' after branch guard");
            ExprPtr value = parse_expr();
            branches.push_back({std::move(guard), std::move(value)});
            if (lex_.peek().kind == Tok::Semicolon) {
                lex_.take();
                continue;
            }
            break;
        }
        expect(Tok::RBrace, "expected '}' closing piecewise");
        if (branches.empty()) throw SyntaxError("piecewise needs at least one branch", pos);
        return ast::piecewise(std::move(branches));
    }

    PredPtr parse_pred() { return parse_or_pred(); }

    PredPtr parse_or_pred() {
        PredPtr p = parse_and_pred();
        while (lex_.peek().kind == Tok::OrOr) {
            lex_.take();
            auto q = std::make_shared<Pred>();
            q->kind = PredKind::Or;
            q->lhs_pred = p;
            q->rhs_pred = parse_and_pred();
            p = q;
        }
        return p;
    }

    PredPtr parse_and_pred() {
        PredPtr p = parse_unary_pred();
        while (lex_.peek().kind == Tok::AndAnd) {
            lex_.take();
            auto q = std::make_shared<Pred>();
            q->kind = PredKind::And;
            q->lhs_pred = p;
            q->rhs_pred = parse_unary_pred();
            p = q;
        }
        return p;
    }

    PredPtr parse_unary_pred() {
        if (lex_.peek().kind == Tok::Bang) {
            lex_.take();
            auto q = std::make_shared<Pred>();
            q->kind = PredKind::Not;
            q->lhs_pred = parse_unary_pred();
            return q;
        }
        return parse_base_pred();
    }

    PredPtr parse_base_pred() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Ident && t.text == "true") {
            lex_.take();
            auto q = std::make_shared<Pred>();
            q->kind = PredKind::True;
            return q;
        }
        if (t.kind == Tok::Ident && t.text == "rat") {
            lex_.take();
            expect(Tok::LParen, "expected '(' after 'rat'");
            const Token v = lex_.peek();
            if (v.kind != Tok::Ident || v.text.size() != 1 ||
                (v.text[0] != 'a' && v.text[0] != 'b' && v.text[0] != 'x'))
                throw SyntaxError("rat() takes a variable", v.pos);
            lex_.take();
            check_variable(v.text[0], v.pos);
            expect(Tok::RParen, "expected ')'");
            auto q = std::make_shared<Pred>();
            q->kind = PredKind::IsRational;
            q->var = v.text[0];
            return q;
        }
        ExprPtr lhs = parse_expr();
        const Token op = lex_.peek();
        PredKind k;
        switch (op.kind) {
        case Tok::Lt: k = PredKind::Lt; break;
        case Tok::Le: k = PredKind::Le; break;
        case Tok::Eq: k = PredKind::Eq; break;
        default:
            throw SyntaxError("expected a comparison ('<', '<=' or '==')", op.pos);
        }
        lex_.take();
        auto q = std::make_shared<Pred>();
        q->kind = k;
        q->lhs_expr = lhs;
        q->rhs_expr = parse_expr();
        return q;
    }

    void check_variable(char v, std::size_t pos) const {
        if (arity_ == Arity::Bivariate && v == 'x')
            throw ArityError("variable 'x' is not available in a bivariate expression", pos);
        if (arity_ == Arity::Univariate && (v == 'a' || v == 'b'))
            throw ArityError(std::string("variable '") + v +
                                 "' is not available in a univariate expression",
                             pos);
    }

    void expect(Tok k, const char* message) {
        if (lex_.peek().kind != k) throw SyntaxError(message, lex_.peek().pos);
        lex_.take();
    }

    Lexer lex_;
    Arity arity_;
};

} // namespace detail

/// Parses `source` with the declared arity. Total and deterministic: every
/// input either yields an AST or throws SyntaxError/ArityError with an offset.
inline ExprAst parse_expr(std::string_view source, Arity arity) {
    if (source.empty()) throw SyntaxError("empty expression", 0);
    detail::Parser p(source, arity);
    return ExprAst{arity, p.parse_toplevel()};
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Variable environment for evaluate(). The mode decides how constants
/// materialize, so it is fixed even for variable-free expressions.
struct Bindings {
    Mode mode = Mode::Float;
    std::optional<Scalar> a, b, x;

    static Bindings bivariate(Scalar av, Scalar bv) {
        Bindings e;
        e.mode = av.mode();
        e.a = std::move(av);
        e.b = std::move(bv);
        return e;
    }
    static Bindings univariate(Scalar xv) {
        Bindings e;
        e.mode = xv.mode();
        e.x = std::move(xv);
        return e;
    }
    static Bindings none(Mode m) {
        Bindings e;
        e.mode = m;
        return e;
    }

    const Scalar& get(char v) const {
        const std::optional<Scalar>* slot = v == 'a' ? &a : v == 'b' ? &b : &x;
        if (!slot->has_value())
            throw EvalError(std::string("unbound variable '") + v + "'");
        return **slot;
    }
};

namespace detail {

inline Scalar eval_expr(const Expr& e, const Bindings& env);

inline bool eval_pred(const Pred& p, const Bindings& env) {
    switch (p.kind) {
    case PredKind::True: return true;
    case PredKind::IsRational: return is_rational(env.get(p.var));
    case PredKind::Lt: return eval_expr(*p.lhs_expr, env) < eval_expr(*p.rhs_expr, env);
    case PredKind::Le: return eval_expr(*p.lhs_expr, env) <= eval_expr(*p.rhs_expr, env);
    case PredKind::Eq: return eval_expr(*p.lhs_expr, env) == eval_expr(*p.rhs_expr, env);
    case PredKind::And: return eval_pred(*p.lhs_pred, env) && eval_pred(*p.rhs_pred, env);
    case PredKind::Or: return eval_pred(*p.lhs_pred, env) || eval_pred(*p.rhs_pred, env);
    case PredKind::Not: return !eval_pred(*p.lhs_pred, env);
    }
    throw EvalError("corrupt predicate node");
}

inline Scalar eval_call(const std::string& name, const Scalar& arg) {
    if (arg.is_exact())
        throw ModeError("function '" + name + "' is float-mode only");
    const double x = arg.value();
    double y;
    if (name == "exp") y = std::exp(x);
    else if (name == "sin") y = std::sin(x);
    else if (name == "cos") y = std::cos(x);
    else if (name == "ln") {
        if (x <= 0.0) throw EvalError("ln of a nonpositive value");
        y = std::log(x);
    } else if (name == "sqrt") {
        if (x < 0.0) throw EvalError("sqrt of a negative value");
        y = std::sqrt(x);
    } else {
        throw EvalError("unknown function '" + name + "'");
    }
    return Scalar::real(y);
}

inline Scalar eval_expr(const Expr& e, const Bindings& env) {
    switch (e.kind) {
    case ExprKind::Constant:
        if (env.mode == Mode::Exact) return Scalar::exact(e.const_rat, e.const_surd);
        return Scalar::real(rational_to_double(e.const_rat) +
                            rational_to_double(e.const_surd) * 1.4142135623730950488);
    case ExprKind::Variable: return env.get(e.var);
    case ExprKind::Add: return eval_expr(*e.lhs, env) + eval_expr(*e.rhs, env);
    case ExprKind::Sub: return eval_expr(*e.lhs, env) - eval_expr(*e.rhs, env);
    case ExprKind::Mul: return eval_expr(*e.lhs, env) * eval_expr(*e.rhs, env);
    case ExprKind::Div: return eval_expr(*e.lhs, env) / eval_expr(*e.rhs, env);
    case ExprKind::Pow: return pow_nonneg(eval_expr(*e.lhs, env), e.exponent);
    case ExprKind::Neg: return -eval_expr(*e.lhs, env);
    case ExprKind::Call: return eval_call(e.callee, eval_expr(*e.lhs, env));
    case ExprKind::Piecewise:
        // Guards are tried in order and only the selected branch's value is
        // ever evaluated, so a division guarded away cannot fault.
        for (const auto& br : e.branches)
            if (eval_pred(*br.guard, env)) return eval_expr(*br.value, env);
        throw NoBranchMatched();
    }
    throw EvalError("corrupt expression node");
}

} // namespace detail

inline Scalar evaluate(const ExprAst& ast, const Bindings& env) {
    return detail::eval_expr(*ast.root, env);
}

/// Wraps a bivariate AST as a callable H(a, b).
inline auto as_bivariate(ExprAst ast) {
    return [ast = std::move(ast)](const Scalar& a, const Scalar& b) {
        return evaluate(ast, Bindings::bivariate(a, b));
    };
}

/// Wraps a univariate AST as a callable f(x).
inline auto as_univariate(ExprAst ast) {
    return [ast = std::move(ast)](const Scalar& x) {
        return evaluate(ast, Bindings::univariate(x));
    };
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace detail {

// Precedence levels: Add/Sub 1, Mul/Div 2, Neg 2, Pow 3, atoms 4.
inline int precedence(const Expr& e) {
    switch (e.kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div:
    case ExprKind::Neg: return 2;
    case ExprKind::Pow: return 3;
    default: return 4;
    }
}

inline void print_expr(const Expr& e, int parent_prec, std::string& out);

inline void print_pred(const Pred& p, int parent_prec, std::string& out) {
    // Or 1, And 2, Not 3. The grammar has no predicate parentheses; parser
    // output never needs them, hand-built trees that would are out of grammar.
    switch (p.kind) {
    case PredKind::True: out += "true"; return;
    case PredKind::IsRational:
        out += "rat(";
        out += p.var;
        out += ')';
        return;
    case PredKind::Lt:
    case PredKind::Le:
    case PredKind::Eq:
        print_expr(*p.lhs_expr, 0, out);
        out += p.kind == PredKind::Lt ? "<" : p.kind == PredKind::Le ? "<=" : "==";
        print_expr(*p.rhs_expr, 0, out);
        return;
    case PredKind::Not:
        out += '!';
        print_pred(*p.lhs_pred, 3, out);
        return;
    case PredKind::And:
    case PredKind::Or: {
        const int prec = p.kind == PredKind::And ? 2 : 1;
        const bool parens = prec < parent_prec;
        if (parens) out += '(';
        print_pred(*p.lhs_pred, prec, out);
        out += p.kind == PredKind::And ? "&&" : "||";
        print_pred(*p.rhs_pred, prec + 1, out);
        if (parens) out += ')';
        return;
    }
    }
}

inline void print_constant(const Expr& e, int parent_prec, std::string& out) {
    const Scalar v = Scalar::exact(e.const_rat, e.const_surd);
    std::string s = v.str();
    // A lone "sqrt2" or unsigned literal is an atom; anything with an inner
    // sign or '*' must be parenthesized to reparse as one unit.
    const bool atom = !e.const_surd.is_zero()
                          ? (e.const_rat.is_zero() && e.const_surd == Rational(1))
                          : e.const_rat.sign() >= 0;
    const bool simple_product =
        e.const_rat.is_zero() && e.const_surd.sign() > 0; // "r/s*sqrt2"
    if (atom || (simple_product && parent_prec <= 2)) {
        out += s;
    } else {
        out += '(';
        out += s;
        out += ')';
    }
}

inline void print_expr(const Expr& e, int parent_prec, std::string& out) {
    const int prec = precedence(e);
    switch (e.kind) {
    case ExprKind::Constant: print_constant(e, parent_prec, out); return;
    case ExprKind::Variable: out += e.var; return;
    case ExprKind::Call:
        out += e.callee;
        out += '(';
        print_expr(*e.lhs, 0, out);
        out += ')';
        return;
    case ExprKind::Piecewise:
        out += "piecewise{";
        for (std::size_t i = 0; i < e.branches.size(); ++i) {
            if (i) out += ';';
            print_pred(*e.branches[i].guard, 0, out);
            out += ':';
            print_expr(*e.branches[i].value, 0, out);
        }
        out += '}';
        return;
    case ExprKind::Neg: {
        const bool parens = prec < parent_prec;
        if (parens) out += '(';
        out += '-';
        print_expr(*e.lhs, 3, out);
        if (parens) out += ')';
        return;
    }
    case ExprKind::Pow: {
        if (precedence(*e.lhs) < 4) {
            out += '(';
            print_expr(*e.lhs, 0, out);
            out += ')';
        } else {
            print_expr(*e.lhs, 4, out);
        }
        out += '^';
        out += std::to_string(e.exponent);
        return;
    }
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div: {
        const bool parens = prec < parent_prec;
        if (parens) out += '(';
        print_expr(*e.lhs, prec, out);
        out += e.kind == ExprKind::Add   ? '+'
               : e.kind == ExprKind::Sub ? '-'
               : e.kind == ExprKind::Mul ? '*'
                                         : '/';
        print_expr(*e.rhs, prec + 1, out);
        if (parens) out += ')';
        return;
    }
    }
}

} // namespace detail

inline std::string ExprAst::pretty() const {
    std::string out;
    detail::print_expr(*root, 0, out);
    return out;
}

} // namespace dq
