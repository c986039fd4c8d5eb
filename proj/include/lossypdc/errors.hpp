#pragma once

#include <stdexcept>
#include <string>

namespace lossypdc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside a tabulated or physical range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Operation called with arguments that violate its contract.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Point outside the domain where a quantity is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of budget. Carries the best estimate so far.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double estimate_magnitude, double error_estimate)
      : Error(what), estimate_magnitude_(estimate_magnitude), error_estimate_(error_estimate) {}

  double estimate_magnitude() const { return estimate_magnitude_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double estimate_magnitude_;
  double error_estimate_;
};

/// Malformed configuration text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Well-formed configuration with an invalid or unknown key.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& key, const std::string& what)
      : Error(key + ": " + what), key_(key) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace lossypdc
