#pragma once

#include <stdexcept>
#include <string>

namespace wsn {

/// Invalid configuration value, malformed config/rule file, or violated precondition on inputs.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fuzzy inference produced an empty output set.
class InferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Head selection was asked to work with no eligible candidates.
class ElectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wsn
