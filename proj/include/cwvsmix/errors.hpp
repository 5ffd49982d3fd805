#pragma once

#include <stdexcept>
#include <string>

namespace cwvsmix {

// Bad user input: malformed files, invalid parameters, dimension mismatches.
// The CLI maps this to exit code 2.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (e.g. covariance not PD after the jitter ladder).
// The CLI maps this to exit code 3.
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cwvsmix
