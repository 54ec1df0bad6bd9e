#pragma once

#include <stdexcept>
#include <string>

namespace parisian {

// Argument outside the mathematical domain of an operation (negative lambda,
// x > b for an upward identity, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Control parameters that violate admissibility, e.g. K >= c for a
// bounded-variation model.
class AdmissibilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Model outside the supported rational family (repeated roots, bad jump data).
class UnsupportedModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two independent routes that must agree did not.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Closed form evaluated at its pole (h_p(0) at p = p_min).
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace parisian
