#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twisted {

/// Failure categories raised by the solvers. The CLI maps these onto exit codes.
enum class ErrorKind {
  NonAdmissible,
  InvalidArgument,
  NonPositiveInitial,
  SingularSource,
  NoZeroFound,
  RescaleWithMultiplier,
  NewtonDivergence,
  MultiplierUnsupported,
  NonConvergence,
  IdentityInapplicable,
  NegativeValues,
  BoundaryNonzero,
  NoSignChange,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for errors caused by bad inputs rather than by a numerical failure.
  bool is_usage_error() const noexcept {
    return kind_ == ErrorKind::NonAdmissible || kind_ == ErrorKind::InvalidArgument ||
           kind_ == ErrorKind::NonPositiveInitial || kind_ == ErrorKind::NegativeValues ||
           kind_ == ErrorKind::BoundaryNonzero || kind_ == ErrorKind::NoSignChange;
  }

 private:
  ErrorKind kind_;
};

}  // namespace twisted
