#pragma once

#include <stdexcept>
#include <string>

namespace fockdimer {

/// Invalid input: out-of-range parameters, malformed files, bad configs.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bad run configuration; messages carry the file and line when known.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An evaluation point sits on (or too close to) a pole of the quantity.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Coincident arguments where the formula is 0/0 or otherwise undefined.
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A truncated series, product or quadrature failed its accuracy check.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fockdimer
