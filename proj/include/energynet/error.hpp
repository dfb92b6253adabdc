#pragma once

#include <stdexcept>
#include <string>

namespace energynet {

enum class ErrorCode {
  kDimensionMismatch,
  kShapeMismatch,
  kInvalidConfig,
  kNonConvergence,
  kMissingNoiseLog,
  kSizeMismatch,
  kParse,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::kShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::kInvalidConfig: return "INVALID_CONFIG";
    case ErrorCode::kNonConvergence: return "NON_CONVERGENCE";
    case ErrorCode::kMissingNoiseLog: return "MISSING_NOISE_LOG";
    case ErrorCode::kSizeMismatch: return "SIZE_MISMATCH";
    case ErrorCode::kParse: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by relaxation when the step budget runs out; carries the last
/// infinity-norm state change so callers can report how far off it was.
class NonConvergence : public Error {
 public:
  NonConvergence(long steps, double residual)
      : Error(ErrorCode::kNonConvergence,
              "no fixed point after " + std::to_string(steps) +
                  " steps (residual " + std::to_string(residual) + ")"),
        steps_(steps),
        residual_(residual) {}

  long steps() const noexcept { return steps_; }
  double residual() const noexcept { return residual_; }

 private:
  long steps_;
  double residual_;
};

}  // namespace energynet
