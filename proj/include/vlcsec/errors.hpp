#pragma once

#include <stdexcept>
#include <string>

namespace vlcsec {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structural problem in a configuration document (unknown key, wrong type).
/// The message carries the offending field path.
struct SchemaError : ConfigError {
  using ConfigError::ConfigError;
};

/// A value outside its admissible range (zeta bounds, lattice constraint, ...).
struct RangeError : ConfigError {
  using ConfigError::ConfigError;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vlcsec
