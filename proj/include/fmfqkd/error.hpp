#pragma once

#include <stdexcept>
#include <string>

namespace fmfqkd {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing or inconsistent configuration (absent attenuation/IL entry, bad preset).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed scenario file. Carries the 1-based line number when known.
class ParseError : public ConfigError {
 public:
  ParseError(int line, const std::string& what)
      : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Numeric argument outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Query outside a tabulated range; no extrapolation is attempted.
class OutOfRangeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Degenerate inputs to a fit or bound (all-zero regressors, mu*nu == nu^2).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class NoSecureDistanceError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fmfqkd
