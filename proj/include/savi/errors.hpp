#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace savi {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter is outside its domain (alpha, sigma, weights...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A unit bet that is negative or NaN.
class InvalidBet : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Inconsistent or unsupported run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Observed data violates the declared schema or support.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  /// 1-based input line, or 0 when the error is not tied to an input line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InsufficientData : public DataError {
 public:
  using DataError::DataError;
};

/// An exact oracle was asked to enumerate more outcomes than it supports.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Input or output stream could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// An internal guarantee did not hold; indicates a bug, never bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace savi
