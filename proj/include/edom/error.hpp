#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace edom {

enum class ErrorCode {
  BadDimensions,
  AttackOnGuard,
  OutOfBounds,
  InvariantViolation,
  ConstructionFailed,
  NoClosure,
  ExceedsLimit,
  NotFound,
  InvalidPlacement,
  Internal,
  Parse,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadDimensions: return "BAD_DIMENSIONS";
    case ErrorCode::AttackOnGuard: return "ATTACK_ON_GUARD";
    case ErrorCode::OutOfBounds: return "OUT_OF_BOUNDS";
    case ErrorCode::InvariantViolation: return "INVARIANT_VIOLATION";
    case ErrorCode::ConstructionFailed: return "CONSTRUCTION_FAILED";
    case ErrorCode::NoClosure: return "NO_CLOSURE";
    case ErrorCode::ExceedsLimit: return "EXCEEDS_LIMIT";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::InvalidPlacement: return "INVALID_PLACEMENT";
    case ErrorCode::Internal: return "INTERNAL";
    case ErrorCode::Parse: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

/// Every recoverable failure in the library is reported through this type;
/// `code()` is stable and machine-readable, `what()` carries the details.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace edom
