#pragma once

#include <stdexcept>
#include <string>

namespace iterlab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (decimal strings, rationals, grid specs).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested tolerance cannot be met at the working precision.
class PrecisionError : public Error {
 public:
  PrecisionError(const std::string& what, int required_digits = 0)
      : Error(what), required_digits_(required_digits) {}

  /// Suggested working precision, 0 when unknown.
  int required_digits() const noexcept { return required_digits_; }

 private:
  int required_digits_;
};

/// An iterative method failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// An iteration cap was exceeded.
class BudgetError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Incompatible operands (variable or symbol mismatch, unsupported slots).
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace iterlab
