#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cvwork {

enum class ErrorCode {
  InvalidArgument,
  NonSymmetricInput,
  NonHermitianInput,
  NotPositiveDefinite,
  NotPhysical,
  SingularConditioning,
  DegenerateConditioning,
  DomainError,
  NonDiagonalInput,
  NonPositiveVariance,
  InsufficientSamples,
  BadRange,
  EmptyBoundary,
  NoTransition,
  NumericalFailure,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonSymmetricInput: return "NonSymmetricInput";
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotPhysical: return "NotPhysical";
    case ErrorCode::SingularConditioning: return "SingularConditioning";
    case ErrorCode::DegenerateConditioning: return "DegenerateConditioning";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonDiagonalInput: return "NonDiagonalInput";
    case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::EmptyBoundary: return "EmptyBoundary";
    case ErrorCode::NoTransition: return "NoTransition";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cvwork
