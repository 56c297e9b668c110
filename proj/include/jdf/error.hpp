#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jdf {

enum class ErrorCode {
  InvalidScenario,
  NotAscending,
  FirstNotZero,
  NonContiguousCoarray,
  ModeUnavailable,
  DegenerateSnapshots,
  NotHermitian,
  NonFinite,
  KTooLarge,
  GridEmpty,
  TooFewPeaks,
  DimensionMismatch,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::NotAscending: return "NotAscending";
    case ErrorCode::FirstNotZero: return "FirstNotZero";
    case ErrorCode::NonContiguousCoarray: return "NonContiguousCoarray";
    case ErrorCode::ModeUnavailable: return "ModeUnavailable";
    case ErrorCode::DegenerateSnapshots: return "DegenerateSnapshots";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::GridEmpty: return "GridEmpty";
    case ErrorCode::TooFewPeaks: return "TooFewPeaks";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace jdf
