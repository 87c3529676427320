#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nmcoh {

enum class ErrorCode {
  NonHermitian,
  InvalidExponent,
  DimensionMismatch,
  AlphaOutOfRange,
  NegativeTime,
  EmptyGrid,
  StepTooLarge,
  StateInvariantViolated,
  UnsupportedChannel,
  DegenerateState,
  SingularPureState,
  DomainViolation,
  OutOfRange,
  EmptySearchGrid,
  InvalidProfile,
  Config,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::StateInvariantViolated: return "StateInvariantViolated";
    case ErrorCode::UnsupportedChannel: return "UnsupportedChannel";
    case ErrorCode::DegenerateState: return "DegenerateState";
    case ErrorCode::SingularPureState: return "SingularPureState";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptySearchGrid: return "EmptySearchGrid";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace nmcoh
