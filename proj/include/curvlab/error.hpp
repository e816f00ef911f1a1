#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curvlab {

enum class ErrorCode {
  InvalidDimension,
  SymmetryViolation,
  DimMismatch,
  InvalidPlane,
  InvalidFrame,
  InvalidNormalization,
  NumericFailure,
  BudgetExhausted,
  RayStaysInside,
  NonInteriorStart,
  InvalidQuery,
  NotEinstein,
  NonpositiveScalar,
  SearchInconsistency,
  NotNormalized,
  NotSymmetricModel,
  ProjectionResidual,
  ParseError,
  UsageError,
};

/// Kebab-case name used in reports and CLI diagnostics.
std::string_view error_name(ErrorCode code) noexcept;

class CurvError : public std::runtime_error {
 public:
  CurvError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace curvlab
