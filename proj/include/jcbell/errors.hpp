#pragma once

#include <stdexcept>
#include <string>

namespace jcbell {

// Bad user input: malformed config, out-of-range parameter, unusable path.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure at run time (PSD violation, eigensolver breakdown, ...).
// The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Requested accuracy cannot be met within the allowed truncation dimension.
class TruncationError : public NumericalError {
 public:
  explicit TruncationError(const std::string& what) : NumericalError(what) {}
};

}  // namespace jcbell
