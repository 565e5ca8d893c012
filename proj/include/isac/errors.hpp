#pragma once

#include <stdexcept>
#include <string>

namespace isac {

// Raised when inputs violate a model precondition (bad dimensions, non-PSD
// correlation, infeasible allocation, unknown experiment name, ...).
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a computation that should succeed on valid input breaks down
// numerically (factorization failure after validation, non-finite result).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace isac
