#pragma once

#include <stdexcept>
#include <string>

namespace sqznb {

// Argument outside an operation's domain (negative dB, efficiency > 1, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input text. `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a data invariant.
class ValidationError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Request outside the span covered by the data (e.g. extrapolation).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Inverse problem with no solution inside its bracket.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Optimization whose objective has no interior maximum.
class NoOptimumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite or otherwise unusable numerical result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sqznb
