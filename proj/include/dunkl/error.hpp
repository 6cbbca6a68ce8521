#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dunkl {

enum class ErrorKind {
  invalid_argument,
  degenerate_direction,
  cap_exceeded,
  index_out_of_range,
  domain_error,
  singular_drift,
  wall_contact,
  smoothness_region,
  step_failure,
  singular_clock,
  invalid_plan,
  unsupported_regime,
  hypothesis_not_met,
  dimension_mismatch,
  schema_error,
  io_error,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::degenerate_direction: return "degenerate-direction";
    case ErrorKind::cap_exceeded: return "cap-exceeded";
    case ErrorKind::index_out_of_range: return "index-out-of-range";
    case ErrorKind::domain_error: return "domain-error";
    case ErrorKind::singular_drift: return "singular-drift";
    case ErrorKind::wall_contact: return "wall-contact";
    case ErrorKind::smoothness_region: return "smoothness-region";
    case ErrorKind::step_failure: return "step-failure";
    case ErrorKind::singular_clock: return "singular-clock";
    case ErrorKind::invalid_plan: return "invalid-plan";
    case ErrorKind::unsupported_regime: return "unsupported-regime";
    case ErrorKind::hypothesis_not_met: return "hypothesis-not-met";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::schema_error: return "schema-error";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace dunkl
