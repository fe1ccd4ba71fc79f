#pragma once

#include <stdexcept>
#include <string>

namespace rnlab {

// Argument lies outside the mathematical domain of an operation
// (q | n, y <= 0, a Gamma pole, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotPrimeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A documented precondition on the parameters does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Configured memory / cost cap exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two independent evaluation paths disagree beyond tolerance.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rnlab
