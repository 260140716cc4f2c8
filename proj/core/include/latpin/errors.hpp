#pragma once

#include <stdexcept>
#include <string>

namespace latpin {

enum class ErrorCode {
  ZeroDirection,
  NonCommensurate,
  NoComplexBranch,
  SearchExhausted,
  NoMaxwellPoint,
  Unsupported,
  FitFailed,
  Overflow,
  ComplexDominance,
  NoPinnedFront,
  EmptyWindow,
  SingularJacobian,
  NoConvergence,
  StepUnderflow,
  InsufficientFolds,
  Instability,
  NoFront,
  BracketInvalid,
  Config,
};

const char* to_string(ErrorCode code) noexcept;

/// Library-wide exception carrying a machine-checkable failure code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::NonCommensurate: return "NonCommensurate";
    case ErrorCode::NoComplexBranch: return "NoComplexBranch";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::NoMaxwellPoint: return "NoMaxwellPoint";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::FitFailed: return "FitFailed";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ComplexDominance: return "ComplexDominance";
    case ErrorCode::NoPinnedFront: return "NoPinnedFront";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::InsufficientFolds: return "InsufficientFolds";
    case ErrorCode::Instability: return "Instability";
    case ErrorCode::NoFront: return "NoFront";
    case ErrorCode::BracketInvalid: return "BracketInvalid";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace latpin
