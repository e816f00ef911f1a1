#pragma once

// Pinching-tensor algebra for Einstein curvature tensors: normalization to
// Ric = (n-1) delta, the extremal constant kappa* keeping R - kappa I in a cone,
// and the exact quadratic identities that S = R - kappa I satisfies.

#include <optional>
#include <string>

#include "curvlab/cones.hpp"

namespace curvlab {

/// Rescales an Einstein tensor (|Ric - (scal/n) delta| <= 1e-8 |R|) so Ric = (n-1) delta.
/// Throws NotEinstein, or NonpositiveScalar for the Ricci-flat / negative branch.
CurvTensor normalize_einstein(const CurvTensor& r);

/// |Ric(R) - (n-1) delta| (Frobenius).
double einstein_residual(const CurvTensor& r);

struct KappaResult {
  double kappa = 0.0;           // bisection value
  double closed_form = 0.0;     // margin(R) / margin(I)
  bool boundary_input = false;  // R already on the boundary: kappa = 0
  MembershipVerdict at_kappa;   // membership of R - kappa I
};

/// Largest kappa in [0, 2] with R - kappa I in the cone, by 80 bisection steps on the
/// margin sign, cross-checked against the linear shift margin(R)/margin(I).
/// Throws SearchInconsistency when the routes differ by more than 1e-5,
/// NotNormalized when Ric != (n-1) delta, InvalidQuery when R is outside the cone.
KappaResult kappa_star(const ConeSpec& cone, const CurvTensor& r);

/// S = R - kappa I.
CurvTensor pinching_tensor(const CurvTensor& r, double kappa);

/// |Q(S) - Q(R) - 2(n-1) kappa (kappa - 2) I| / max(1, |R|^2) for normalized Einstein R.
double eq3_residual(const CurvTensor& r, double kappa);

/// |Q(S) - 2(n-1) S - 2(n-1) kappa (kappa - 1) I| / max(1, |R|^2); requires a
/// normalized Einstein R with Q(R) = 2(n-1) R (Laplacian-free symmetric models).
double prop1_residual_symmetric(const CurvTensor& r, double kappa);

enum class RigidityVerdict { ConstantCurvature, BoundaryModel, Inconclusive };
std::string verdict_name(RigidityVerdict v);

struct RigidityReport {
  std::string input_id;
  ConeKind cone = ConeKind::NIC;
  int dim = 0;
  double scale_factor = 1.0;  // normalized = scale_factor * input
  double einstein_residual = 0.0;
  double kappa_star = 0.0;
  double kappa_closed_form = 0.0;
  MembershipVerdict at_kappa_star;
  double eq3_residual = 0.0;
  std::optional<double> prop1_residual_symmetric;  // empty when not applicable
  double fixed_point_residual = 0.0;
  double s_norm = 0.0;
  RigidityVerdict verdict = RigidityVerdict::Inconclusive;
};

/// Einstein check, normalization, interior check, kappa*, S, residuals, verdict.
RigidityReport rigidity_probe(const ConeSpec& cone, const CurvTensor& r, const std::string& input_id = "");

}  // namespace curvlab
