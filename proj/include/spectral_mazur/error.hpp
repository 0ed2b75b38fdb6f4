#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spectral_mazur {

/// Failure categories raised by the library. The CLI maps these onto its
/// exit-code contract.
enum class ErrorCode {
  InvalidArgument,
  ParseError,
  NotSmooth,
  NotStrictlyConvex,
  ZeroVector,
  ZeroMatrix,
  NotPositive,
  NotState,
  NotProbability,
  NotUnitNorm,
  NotUnitTraceNorm,
  DimensionMismatch,
  DimensionTooLarge,
  NumericalFailure,
  NoConvergence,
  UnknownSuite,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotSmooth: return "NotSmooth";
    case ErrorCode::NotStrictlyConvex: return "NotStrictlyConvex";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotState: return "NotState";
    case ErrorCode::NotProbability: return "NotProbability";
    case ErrorCode::NotUnitNorm: return "NotUnitNorm";
    case ErrorCode::NotUnitTraceNorm: return "NotUnitTraceNorm";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when an iterative solver stops before meeting its certificate.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, double residual)
      : Error(ErrorCode::NoConvergence, what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace spectral_mazur
