#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tpqrm {

/// Broad failure class; the CLI maps these onto exit codes.
enum class ErrorCategory { validation, numerical, io };

enum class ErrorKind {
  invalid_space,
  invalid_index,
  shape,
  configuration,
  singular_detuning,
  validation,
  non_unique_steady_state,
  stiffness,
  precondition,
  divergent_inductance,
  interval,
  unsupported_variant,
  io,
};

std::string_view to_string(ErrorKind kind);
ErrorCategory category_of(ErrorKind kind);

/// Single exception type for the library. `field` names the offending input
/// (a config key, a shift name, a parameter) when one is known.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::string field = {})
      : std::runtime_error(std::move(message)), kind_(kind), field_(std::move(field)) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorKind kind_;
  std::string field_;
};

/// Raised by steady_state when the stationary state is not unique.
class NonUniqueSteadyState : public Error {
 public:
  NonUniqueSteadyState(std::string message, double gap)
      : Error(ErrorKind::non_unique_steady_state, std::move(message)), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

}  // namespace tpqrm
