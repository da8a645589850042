#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace decouple {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (non-unit axis,
/// negative frequency, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Time argument outside the gate interval [0, tau].
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A matrix that should be unitary / Hermitian / traceless is not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A series or refinement check failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Invalid or contradictory experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public ConfigError {
 public:
  ValidationError(const std::string& key, const std::string& what)
      : ConfigError(key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Numerical breakdown of a trajectory (non-finite state, trace drift).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// API misuse that is not a data problem (e.g. off-grid lookups with
/// interpolation disabled).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV or other tabular input.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace decouple
