#pragma once

#include <stdexcept>
#include <string>

namespace lq {

/// Invalid user-facing configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure did not reach its required accuracy (exit code 3).
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured size or memory cap was exceeded (exit code 4).
class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested band truncation cuts through overlapping bands.
class BandOverlapError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Operator does not commute with the site reflection.
class SymmetryError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace lq
