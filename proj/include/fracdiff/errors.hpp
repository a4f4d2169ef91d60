#pragma once

#include <stdexcept>
#include <string>

namespace fracdiff {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A structurally valid input violates a modelling condition
/// (order measure conditions, interior-point requirements, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative evaluator (series, quadrature) could not reach the
/// requested accuracy. Carries the best error estimate it achieved.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved_error)
        : std::runtime_error(what + " (achieved error " + std::to_string(achieved_error) + ")"),
          achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

/// A truncated series whose certified tail bound exceeds the tolerance.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double tail_bound)
        : std::runtime_error(what + " (tail bound " + std::to_string(tail_bound) + ")"),
          tail_bound_(tail_bound) {}

    double tail_bound() const noexcept { return tail_bound_; }

private:
    double tail_bound_;
};

/// A simulation loop ran past its configured step budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fracdiff
