#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "dqkit/errors.hpp"

namespace dq {

using Rational = boost::multiprecision::cpp_rational;
using BigInt   = boost::multiprecision::cpp_int;

enum class Mode { Float, Exact };

inline const char* mode_name(Mode m) { return m == Mode::Float ? "float" : "exact"; }

namespace detail {

inline int sign_of(const Rational& q) { return q.sign(); }

// Sign of q + r*sqrt(2) without leaving exact arithmetic.
inline int surd_sign(const Rational& q, const Rational& r) {
    const int sq = q.sign(), sr = r.sign();
    if (sr == 0) return sq;
    if (sq == 0) return sr;
    if (sq == sr) return sq;
    // Opposite signs: compare q^2 against 2 r^2.
    const Rational d = q * q - 2 * r * r;
    return sq > 0 ? d.sign() : -d.sign();
}

inline double rational_to_double(const Rational& q) { return q.convert_to<double>(); }

} // namespace detail

/// A number in one of two modes: IEEE double, or an exact element q + r*sqrt(2)
/// of the field Q(sqrt2). Exact mode keeps rationals in lowest terms with a
/// positive denominator (the backing representation guarantees it).
/// Mixing modes in arithmetic is an error, never a silent promotion.
class Scalar {
public:
    Scalar() : mode_(Mode::Float), f_(0.0) {}

    static Scalar real(double v) {
        Scalar s;
        s.mode_ = Mode::Float;
        s.f_ = v;
        return s;
    }

    static Scalar exact(Rational q, Rational r = Rational(0)) {
        Scalar s;
        s.mode_ = Mode::Exact;
        s.q_ = std::move(q);
        s.r_ = std::move(r);
        return s;
    }

    static Scalar zero(Mode m) { return m == Mode::Float ? real(0.0) : exact(0); }
    static Scalar one(Mode m) { return m == Mode::Float ? real(1.0) : exact(1); }

    Mode mode() const { return mode_; }
    bool is_exact() const { return mode_ == Mode::Exact; }

    double value() const {
        require_mode(Mode::Float, "value() needs a float-mode scalar");
        return f_;
    }
    const Rational& rat_part() const {
        require_mode(Mode::Exact, "rat_part() needs an exact-mode scalar");
        return q_;
    }
    const Rational& surd_part() const {
        require_mode(Mode::Exact, "surd_part() needs an exact-mode scalar");
        return r_;
    }

    double to_double() const {
        if (mode_ == Mode::Float) return f_;
        return detail::rational_to_double(q_) +
               detail::rational_to_double(r_) * 1.4142135623730950488;
    }

    bool is_zero() const {
        return mode_ == Mode::Float ? f_ == 0.0 : (q_.is_zero() && r_.is_zero());
    }

    friend Scalar operator-(const Scalar& s) {
        if (s.mode_ == Mode::Float) return real(-s.f_);
        return exact(-s.q_, -s.r_);
    }

    friend Scalar operator+(const Scalar& x, const Scalar& y) {
        check_same_mode(x, y);
        if (x.mode_ == Mode::Float) return real(x.f_ + y.f_);
        return exact(x.q_ + y.q_, x.r_ + y.r_);
    }

    friend Scalar operator-(const Scalar& x, const Scalar& y) {
        check_same_mode(x, y);
        if (x.mode_ == Mode::Float) return real(x.f_ - y.f_);
        return exact(x.q_ - y.q_, x.r_ - y.r_);
    }

    friend Scalar operator*(const Scalar& x, const Scalar& y) {
        check_same_mode(x, y);
        if (x.mode_ == Mode::Float) return real(x.f_ * y.f_);
        return exact(x.q_ * y.q_ + 2 * x.r_ * y.r_, x.q_ * y.r_ + x.r_ * y.q_);
    }

    friend Scalar operator/(const Scalar& x, const Scalar& y) {
        check_same_mode(x, y);
        if (y.is_zero()) throw DivisionByZero();
        if (x.mode_ == Mode::Float) return real(x.f_ / y.f_);
        // (q2 + r2 sqrt2)^-1 = (q2 - r2 sqrt2) / (q2^2 - 2 r2^2); the norm is
        // nonzero for every nonzero element because sqrt2 is irrational.
        const Rational norm = y.q_ * y.q_ - 2 * y.r_ * y.r_;
        const Rational nq = x.q_ * y.q_ - 2 * x.r_ * y.r_;
        const Rational nr = x.r_ * y.q_ - x.q_ * y.r_;
        return exact(nq / norm, nr / norm);
    }

    /// Three-way compare; throws ModeError on mixed modes.
    friend int cmp(const Scalar& x, const Scalar& y) {
        check_same_mode(x, y);
        if (x.mode_ == Mode::Float) return x.f_ < y.f_ ? -1 : (x.f_ > y.f_ ? 1 : 0);
        return detail::surd_sign(x.q_ - y.q_, x.r_ - y.r_);
    }

    friend bool operator==(const Scalar& x, const Scalar& y) { return cmp(x, y) == 0; }
    friend bool operator!=(const Scalar& x, const Scalar& y) { return cmp(x, y) != 0; }
    friend bool operator<(const Scalar& x, const Scalar& y) { return cmp(x, y) < 0; }
    friend bool operator<=(const Scalar& x, const Scalar& y) { return cmp(x, y) <= 0; }
    friend bool operator>(const Scalar& x, const Scalar& y) { return cmp(x, y) > 0; }
    friend bool operator>=(const Scalar& x, const Scalar& y) { return cmp(x, y) >= 0; }

    /// Text form: floats as shortest round-trip decimal; exact values as
    /// `p/q`, `p/q+r/s*sqrt2`, `p/q-r/s*sqrt2` or `r/s*sqrt2` (no spaces,
    /// `/q` omitted when the denominator is 1).
    std::string str() const {
        if (mode_ == Mode::Float) {
            char buf[32];
            auto res = std::to_chars(buf, buf + sizeof(buf), f_);
            return std::string(buf, res.ptr);
        }
        auto rat_str = [](const Rational& v) {
            std::ostringstream os;
            os << v;
            return os.str();
        };
        if (r_.is_zero()) return rat_str(q_);
        std::string surd = rat_str(abs(r_)) + "*sqrt2";
        if (q_.is_zero()) return (r_.sign() < 0 ? "-" : "") + surd;
        return rat_str(q_) + (r_.sign() < 0 ? "-" : "+") + surd;
    }

    static Scalar parse(std::string_view text, Mode mode);

private:
    void require_mode(Mode m, const char* what) const {
        if (mode_ != m) throw ModeError(what);
    }
    static void check_same_mode(const Scalar& x, const Scalar& y) {
        if (x.mode_ != y.mode_)
            throw ModeError("mixed float/exact arithmetic is not allowed");
    }

    Mode mode_;
    double f_ = 0.0;
    Rational q_, r_; // exact value = q_ + r_ * sqrt(2)
};

/// True iff an exact scalar has no sqrt2 component. Rationality of a double
/// is undecidable, so float mode raises ModeError.
inline bool is_rational(const Scalar& s) {
    if (!s.is_exact())
        throw ModeError("is_rational is only decidable in exact mode");
    return s.surd_part().is_zero();
}

/// Named form of the field quotient; identical to operator/.
inline Scalar scalar_div(const Scalar& n, const Scalar& d) { return n / d; }

inline Scalar pow_nonneg(const Scalar& base, int exponent) {
    if (exponent < 0) throw DomainError("pow: exponent must be nonnegative");
    Scalar acc = Scalar::one(base.mode());
    Scalar b = base;
    for (int e = exponent; e > 0; e >>= 1) {
        if (e & 1) acc = acc * b;
        if (e > 1) b = b * b;
    }
    return acc;
}

namespace detail {

// Parses `p`, `p/q`, or a finite decimal (optionally with exponent) into an
// exact rational. Returns nullopt when `text` is not such a literal.
inline std::optional<Rational> parse_rational_literal(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t i = 0;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
        return std::nullopt;

    BigInt int_part = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        int_part = int_part * 10 + (text[i++] - '0');

    Rational value(int_part);
    if (i < text.size() && text[i] == '/') {
        ++i;
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
            return std::nullopt;
        BigInt den = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
            den = den * 10 + (text[i++] - '0');
        if (den.is_zero()) throw DivisionByZero("rational literal with zero denominator");
        value = Rational(int_part) / Rational(den);
    } else {
        if (i < text.size() && text[i] == '.') {
            ++i;
            BigInt frac = 0, scale = 1;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                frac = frac * 10 + (text[i++] - '0');
                scale *= 10;
            }
            value += Rational(frac) / Rational(scale);
        }
        if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
            ++i;
            bool eneg = false;
            if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
                eneg = text[i] == '-';
                ++i;
            }
            if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                return std::nullopt;
            long expo = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                expo = expo * 10 + (text[i++] - '0');
            BigInt pow10 = 1;
            for (long k = 0; k < expo; ++k) pow10 *= 10;
            if (eneg)
                value /= Rational(pow10);
            else
                value *= Rational(pow10);
        }
    }
    if (i != text.size()) return std::nullopt;
    return neg ? -value : value;
}

// `term` is a rational literal, `sqrt2`, or `lit*sqrt2`. Adds it into (q, r).
inline bool accumulate_surd_term(std::string_view term, bool negate, Rational& q, Rational& r) {
    bool is_surd = false;
    if (term.size() >= 5 && term.substr(term.size() - 5) == "sqrt2") {
        is_surd = true;
        term.remove_suffix(5);
        if (!term.empty()) {
            if (term.back() != '*') return false;
            term.remove_suffix(1);
        }
    }
    Rational coeff(1);
    if (!term.empty()) {
        if (term == "-") {
            coeff = -1;
        } else {
            auto lit = parse_rational_literal(term);
            if (!lit) return false;
            coeff = *lit;
        }
    } else if (!is_surd) {
        return false;
    }
    if (negate) coeff = -coeff;
    (is_surd ? r : q) += coeff;
    return true;
}

} // namespace detail

inline Scalar Scalar::parse(std::string_view text, Mode mode) {
    std::string compact;
    compact.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
    if (compact.empty()) throw SyntaxError("empty scalar literal", 0);

    // Split on the top-level +/- that separates the rational and surd terms.
    // A sign at position 0 or right after e/E belongs to a literal.
    Rational q(0), r(0);
    std::size_t start = 0;
    bool lead_neg = false;
    if (compact[0] == '+' || compact[0] == '-') {
        lead_neg = compact[0] == '-';
        start = 1;
    }
    std::size_t split = std::string::npos;
    for (std::size_t i = start; i < compact.size(); ++i) {
        if ((compact[i] == '+' || compact[i] == '-') &&
            !(i > 0 && (compact[i - 1] == 'e' || compact[i - 1] == 'E'))) {
            split = i;
            break;
        }
    }

    bool ok;
    if (split == std::string::npos) {
        ok = detail::accumulate_surd_term(compact.substr(start), lead_neg, q, r);
    } else {
        ok = detail::accumulate_surd_term(
                 std::string_view(compact).substr(start, split - start), lead_neg, q, r) &&
             detail::accumulate_surd_term(std::string_view(compact).substr(split + 1),
                                          compact[split] == '-', q, r);
    }
    if (!ok) {
        if (mode == Mode::Float) {
            double v = 0;
            auto res = std::from_chars(compact.data(), compact.data() + compact.size(), v);
            if (res.ec == std::errc() && res.ptr == compact.data() + compact.size())
                return Scalar::real(v);
        }
        throw SyntaxError("invalid scalar literal '" + compact + "'", 0);
    }
    if (mode == Mode::Exact) return Scalar::exact(std::move(q), std::move(r));
    return Scalar::real(detail::rational_to_double(q) +
                        detail::rational_to_double(r) * 1.4142135623730950488);
}

/// Pass/fail policy for float-mode residuals: |r| <= abs_tol + rel_tol*|m|
/// against a reference magnitude m. Exact mode ignores both bounds and
/// requires an exactly zero residual.
struct Tolerance {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;

    bool passes(double residual, double reference) const {
        return std::abs(residual) <= abs_tol + rel_tol * std::abs(reference);
    }

    bool passes(const Scalar& residual, const Scalar& reference) const {
        if (residual.is_exact()) return residual.is_zero();
        return passes(residual.value(), reference.to_double());
    }
};

} // namespace dq
