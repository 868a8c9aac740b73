#pragma once

#include <stdexcept>
#include <string>

namespace subic {

// Bad or malformed input data (files, CSV cells, dimension mismatches).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure inside the solver (non-finite values, divergence).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration or API misuse.
struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace subic
