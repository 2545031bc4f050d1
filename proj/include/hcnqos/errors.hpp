#pragma once

#include <stdexcept>
#include <string>

namespace hcnqos {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input or scenario that violates a documented invariant. The CLI maps
/// every ValidationError (and subclasses) to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The macro region cannot host even a single small cell.
class InfeasibleRegionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Closed-form mean path loss requested outside d > R.
class TaylorValidityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hcnqos
