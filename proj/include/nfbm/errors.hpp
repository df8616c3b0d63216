#pragma once

#include <stdexcept>
#include <string>

namespace nfbm {

// Argument outside the domain of a function (bad H, negative time, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A triangular pivot vanished.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cholesky or Schur complement failed even after jitter.
struct ConditioningError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature did not reach its tolerance.
struct AccuracyError : std::runtime_error {
    AccuracyError(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved relative tolerance " + std::to_string(achieved) + ")"),
          achieved_tolerance(achieved) {}
    double achieved_tolerance;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Circulant embedding produced a negative eigenvalue.
struct EmbeddingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

struct UnsupportedOrderError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Differentiating more often than the path is smooth.
struct RoughnessError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace nfbm
