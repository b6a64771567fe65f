#pragma once

#include <stdexcept>
#include <string>

namespace splf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid truncation, dimension or other structural parameter.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operands live on incompatible mode sets or dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Grid too coarse to represent the requested band-limited data.
class AliasingError : public Error {
 public:
  using Error::Error;
};

/// A time step produced a non-finite or runaway state.
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, double offending_norm)
      : Error(what), norm_(offending_norm) {}
  double offending_norm() const noexcept { return norm_; }

 private:
  double norm_;
};

}  // namespace splf
