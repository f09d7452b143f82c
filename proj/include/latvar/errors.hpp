#pragma once

#include <stdexcept>
#include <string>

namespace latvar {

/// Precondition or contract violation on user-supplied input.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exact (exponential) method was asked to run on an instance above its
/// size guard.
class GuardViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The dense LP solver could not certify an optimum.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace latvar
