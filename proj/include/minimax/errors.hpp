#pragma once

#include <stdexcept>
#include <string>

namespace minimax {

// Invalid user-supplied configuration (CLI exit code 2). `field` carries the
// offending config path, e.g. "optimizer.alpha".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Numerical failure mid-computation (CLI exit code 3): non-finite values,
// solver non-convergence.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace minimax
