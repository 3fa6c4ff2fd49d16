#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace weno {

/// Invalid user input: bad extents, unknown names, out-of-range parameters.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::string key = {})
      : std::runtime_error(what), key_(std::move(key)) {}

  /// Offending configuration key, empty when not tied to one.
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Non-finite or non-physical solver state. Carries the step index when known.
class StateError : public std::runtime_error {
 public:
  explicit StateError(const std::string& what, std::int64_t step = -1)
      : std::runtime_error(step >= 0 ? what + " (step " + std::to_string(step) + ")" : what),
        step_(step) {}

  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

/// Non-finite values produced while sampling initial data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace weno
