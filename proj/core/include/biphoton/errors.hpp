#pragma once

#include <stdexcept>
#include <string>

namespace biphoton {

/// Raised when a physical or numerical precondition of a simulation step fails
/// (non-unitary transfer matrix, vanishing state, registry mismatch, ...).
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the least-squares fitters when data cannot be described by the
/// requested model or the iteration does not converge.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace biphoton
