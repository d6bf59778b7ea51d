#pragma once

#include <stdexcept>
#include <string>

namespace hyprel {

/// Truncation level sits at or above the highest point of the surface piece.
class EmptyTruncationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature exhausted its node budget before reaching the
/// requested tolerance. Carries the best estimate obtained so far.
class BudgetExceededError : public std::runtime_error {
public:
    BudgetExceededError(const std::string& msg, double best, double bound)
        : std::runtime_error(msg), best_estimate(best), error_bound(bound) {}
    double best_estimate;
    double error_bound;
};

/// Two configurations do not share the same asymptotic boundary, so their
/// relative entropy is undefined.
class IncomparableConfigsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The truncated-area difference does not settle to a limit; the singular
/// part of the expansions fails to cancel.
class DivergentDifferenceError : public std::runtime_error {
public:
    DivergentDifferenceError(const std::string& msg, double tail_ratio)
        : std::runtime_error(msg), tail_ratio(tail_ratio) {}
    double tail_ratio;
};

/// Least-squares design matrix is numerically rank deficient.
class IllConditionedFitError : public std::runtime_error {
public:
    IllConditionedFitError(const std::string& msg, double condition)
        : std::runtime_error(msg), condition(condition) {}
    double condition;
};

/// Geometric precondition failed (surfaces not graphable over each other,
/// mismatched boundary multiplicity, and the like).
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A curvature integral failed its tail-convergence test.
class NonconvergentIntegralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Time step rejected by the stability monitor; carries a suggestion.
class StepRejectedError : public std::runtime_error {
public:
    StepRejectedError(const std::string& msg, double suggested)
        : std::runtime_error(msg), suggested_dt(suggested) {}
    double suggested_dt;
};

/// A fractional-linear map sent a finite input to infinity.
class MappedToInfinityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Radial projection onto the background circle is undefined at the center.
class UndefinedProjectionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace hyprel
