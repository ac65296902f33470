#pragma once

#include <stdexcept>
#include <string>

namespace tramflow {

/// Malformed or inconsistent input (files, ids, parameters).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a schedule breaks injectivity except for the empty set.
class AdmissibilityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A broken internal invariant. Should be unreachable.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tramflow
