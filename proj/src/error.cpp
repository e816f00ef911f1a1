#include "curvlab/error.hpp"

namespace curvlab {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::SymmetryViolation: return "symmetry-violation";
    case ErrorCode::DimMismatch: return "dim-mismatch";
    case ErrorCode::InvalidPlane: return "invalid-plane";
    case ErrorCode::InvalidFrame: return "invalid-frame";
    case ErrorCode::InvalidNormalization: return "invalid-normalization";
    case ErrorCode::NumericFailure: return "numeric-failure";
    case ErrorCode::BudgetExhausted: return "budget-exhausted";
    case ErrorCode::RayStaysInside: return "ray-stays-inside";
    case ErrorCode::NonInteriorStart: return "non-interior-start";
    case ErrorCode::InvalidQuery: return "invalid-query";
    case ErrorCode::NotEinstein: return "not-einstein";
    case ErrorCode::NonpositiveScalar: return "nonpositive-scalar";
    case ErrorCode::SearchInconsistency: return "search-inconsistency";
    case ErrorCode::NotNormalized: return "not-normalized";
    case ErrorCode::NotSymmetricModel: return "not-symmetric-model";
    case ErrorCode::ProjectionResidual: return "projection-residual";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::UsageError: return "usage-error";
  }
  return "unknown";
}

}  // namespace curvlab
