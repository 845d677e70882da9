#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dq {

/// Base class for every error the toolkit raises on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
    explicit DivisionByZero(const std::string& what) : Error(what) {}
};

/// Mixed float/exact arithmetic, or a construct only one mode supports.
struct ModeError : Error {
    using Error::Error;
};

struct SyntaxError : Error {
    std::size_t position;
    SyntaxError(const std::string& what, std::size_t pos)
        : Error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

/// A variable that exists but does not belong to the declared arity.
struct ArityError : Error {
    std::size_t position;
    ArityError(const std::string& what, std::size_t pos)
        : Error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

/// Runtime failure while evaluating an expression or function view.
struct EvalError : Error {
    using Error::Error;
};

struct NoBranchMatched : EvalError {
    NoBranchMatched() : EvalError("piecewise: no branch guard matched") {}
};

struct DiagonalUndefined : EvalError {
    DiagonalUndefined() : EvalError("difference quotient on the diagonal requires a derivative") {}
};

struct DomainError : Error {
    using Error::Error;
};

struct InsufficientPool : Error {
    using Error::Error;
};

struct InfeasibleGap : Error {
    using Error::Error;
};

/// Adaptive quadrature ran out of subdivisions. Carries the best estimate so
/// callers can decide whether "inconclusive" still has diagnostic value.
struct NonConvergence : Error {
    double best_estimate;
    double error_estimate;
    NonConvergence(double value, double err)
        : Error("quadrature did not converge (estimate " + std::to_string(value) +
                ", error " + std::to_string(err) + ")"),
          best_estimate(value), error_estimate(err) {}
};

struct StepTooLarge : Error {
    using Error::Error;
};

struct MissingCoefficient : Error {
    using Error::Error;
};

} // namespace dq
