#pragma once

#include <stdexcept>
#include <string>

namespace qbreak {

// Base for every error thrown by the library. The CLI maps DomainError and
// ConfigError to usage failures and everything else to numerical failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration (incompatible method and potential, bad grid, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure failed to reach its requested tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : Error(what + " (achieved " + std::to_string(achieved) + ")"), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

// Energy below the bottom of the potential.
class EmptyRangeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Classical period requested exactly on the separatrix.
class DivergentPeriodError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Too few weighted states (or roots) to define a minimal frequency.
class InsufficientSupportError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace qbreak
