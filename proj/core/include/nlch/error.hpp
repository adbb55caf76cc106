#pragma once

#include <stdexcept>
#include <string>

namespace nlch {

// Invalid arguments and violated preconditions (bad grid sizes, parameters
// out of range, mismatched grids). Maps to the "usage" exit code in the CLI.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation of the singular potential outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Solver failures: inner iteration divergence at dt_min, monitor aborts,
// equilibrium non-convergence.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Snapshot / CSV / filesystem failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration parse or validation failure; message names the key path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlch
