#pragma once

#include <stdexcept>
#include <string>

namespace tailproc {

// Error taxonomy used across the library. The CLI maps invalid_parameter
// (including config_error) to exit code 2 and the estimate-level failures
// (degenerate_estimate, empty_estimate, divergence_error) to exit code 3.

struct invalid_parameter : std::runtime_error {
  explicit invalid_parameter(const std::string& msg) : std::runtime_error(msg) {}
};

struct config_error : invalid_parameter {
  std::string key;
  config_error(std::string k, const std::string& msg)
      : invalid_parameter(k + ": " + msg), key(std::move(k)) {}
};

struct degenerate_estimate : std::runtime_error {
  explicit degenerate_estimate(const std::string& msg) : std::runtime_error(msg) {}
};

struct empty_estimate : std::runtime_error {
  explicit empty_estimate(const std::string& msg) : std::runtime_error(msg) {}
};

struct divergence_error : std::runtime_error {
  long long step;
  divergence_error(long long t, const std::string& msg)
      : std::runtime_error(msg), step(t) {}
};

}  // namespace tailproc
