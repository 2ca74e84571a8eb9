#pragma once

#include <stdexcept>
#include <string>

namespace domination {

/// Parameter sets that violate the model's admissibility conditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation at a pole, on a branch cut, or outside the analytic domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quadrature, root-finding or consistency failures inside a solve.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulated path hit its event budget before either stopping condition.
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input files or unwritable outputs.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace domination
