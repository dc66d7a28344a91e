#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gambles {

/// Root of every error thrown by the library.
class GambleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input. The CLI maps these to exit code 2.
class ValidationError : public GambleError {
 public:
  using GambleError::GambleError;
};

class ProbabilitySumError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonPositiveProbability : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DuplicateWealthChange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonPositiveDuration : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Syntax error in a gamble spec document; line and column are 1-based.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                        ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Arithmetic that leaves the domain of a formula. The CLI maps these to exit code 3.
class NumericDomainError : public GambleError {
 public:
  using GambleError::GambleError;
};

class DomainError : public NumericDomainError {
 public:
  using NumericDomainError::NumericDomainError;
};

/// Some wealth change falls below -W, so a growth factor would be negative.
class NegativeFactorError : public NumericDomainError {
 public:
  using NumericDomainError::NumericDomainError;
};

/// A payout is too large for a computation that has no log-space route.
class OverflowToFinite : public NumericDomainError {
 public:
  using NumericDomainError::NumericDomainError;
};

}  // namespace gambles
