#pragma once

#include <stdexcept>
#include <string>

namespace kfw {

// Bad arguments / malformed configuration. CLI maps this to exit code 1.
struct param_error : std::invalid_argument {
  explicit param_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failure at runtime (non-finite values, convergence breakdown).
// CLI maps this to exit code 2.
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kfw
