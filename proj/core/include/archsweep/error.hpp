#pragma once

#include <stdexcept>
#include <string>

namespace archsweep {

// Stable error identities. to_string(code) is the machine-parsable token
// used in the CLI's "error:<code>: message" lines.
enum class errc {
  malformed_label,
  bounds_overflow,
  dimension_mismatch,
  diverged_training,
  empty_input,
  insufficient_data,
  degenerate_feature,
  malformed_row,
  non_monotone_dates,
  non_positive_close,
  domain_error,
  zero_variance,
  singular_design,
  name_collision,
  bad_config,
  io_error,
  usage,
};

constexpr const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::malformed_label:    return "MalformedLabel";
    case errc::bounds_overflow:    return "BoundsOverflow";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::diverged_training:  return "DivergedTraining";
    case errc::empty_input:        return "EmptyInput";
    case errc::insufficient_data:  return "InsufficientData";
    case errc::degenerate_feature: return "DegenerateFeature";
    case errc::malformed_row:      return "MalformedRow";
    case errc::non_monotone_dates: return "NonMonotoneDates";
    case errc::non_positive_close: return "NonPositiveClose";
    case errc::domain_error:       return "DomainError";
    case errc::zero_variance:      return "ZeroVariance";
    case errc::singular_design:    return "SingularDesign";
    case errc::name_collision:     return "NameCollision";
    case errc::bad_config:         return "BadConfig";
    case errc::io_error:           return "IoError";
    case errc::usage:              return "Usage";
  }
  return "Unknown";
}

// Bad invocation or config exits 2 at the CLI; data/runtime failures exit 1.
constexpr bool is_usage_error(errc code) noexcept {
  return code == errc::usage || code == errc::bad_config;
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  errc code() const noexcept { return code_; }
  // Message without the code prefix; what() carries both.
  const std::string& message() const noexcept { return message_; }

 private:
  errc code_;
  std::string message_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace archsweep
