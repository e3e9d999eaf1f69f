#pragma once

#include <stdexcept>
#include <string>

namespace tfe {

// Raised when an input lies outside the domain where an operation is
// defined (branch locus, cone interior, stencil leaving a grid).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for malformed user-supplied data (surface files, options).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative solver gave up before reaching its tolerance.
class ConvergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace tfe
