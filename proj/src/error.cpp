#include "tpqrm/error.hpp"

namespace tpqrm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_space: return "invalid-space";
    case ErrorKind::invalid_index: return "invalid-index";
    case ErrorKind::shape: return "shape";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::singular_detuning: return "singular-detuning";
    case ErrorKind::validation: return "validation";
    case ErrorKind::non_unique_steady_state: return "non-unique-steady-state";
    case ErrorKind::stiffness: return "stiffness";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::divergent_inductance: return "divergent-inductance";
    case ErrorKind::interval: return "interval";
    case ErrorKind::unsupported_variant: return "unsupported-variant";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

ErrorCategory category_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::non_unique_steady_state:
    case ErrorKind::stiffness:
    case ErrorKind::singular_detuning:
    case ErrorKind::divergent_inductance:
    case ErrorKind::interval:
      return ErrorCategory::numerical;
    case ErrorKind::io:
      return ErrorCategory::io;
    default:
      return ErrorCategory::validation;
  }
}

}  // namespace tpqrm
