#pragma once

#include <stdexcept>
#include <string>

namespace ionssh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: inconsistent dimensions, out-of-range parameters, malformed
/// configuration. The CLI maps these to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (non-convergence, instability, drift).
/// Carries the last residual when one is meaningful. CLI exit code 3.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual = 0.0)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace ionssh
