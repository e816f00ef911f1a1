#pragma once

// Curvature-condition cones: membership margins, boundary projection,
// tangent-cone queries, and statistical checks of the cone conditions.

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "curvlab/frame_search.hpp"
#include "curvlab/tensor.hpp"

namespace curvlab {

enum class ConeKind { NIC, NonnegCurvOp, NonnegScalar, NonnegRicci, NonnegSectional };

struct ConeSpec {
  ConeKind kind = ConeKind::NIC;
  int dim = 4;
  double tol = 1e-9;
  SearchOptions search;
  /// Constraints within this value of zero count as active in tangent-cone tests.
  double activation_tol = 1e-6;
};

/// Throws InvalidDimension / UsageError for inconsistent specs (NIC needs dim >= 4, tol > 0).
void validate(const ConeSpec& cone);

std::string cone_name(ConeKind kind);
/// Accepts "nic", "NonnegCurvOp", "nonneg_curv_op", "curvop", ...
ConeKind parse_cone_kind(const std::string& name);

/// Margin of the identity tensor: 4 (NIC), 1 (curvature operator), n(n-1) (scalar),
/// n-1 (Ricci), 1 (sectional). Margins shift linearly: margin(R - kI) = margin(R) - k * this.
double identity_margin(ConeKind kind, int n);

struct Plane {
  Vector u, v;
};

/// Minimizing witness: a 4-frame (NIC), a unit eigenvector (curvature operator on
/// bivectors, or Ricci), a 2-plane (sectional), or nothing (scalar).
using Witness = std::variant<std::monostate, Frame4, Vector, Plane>;

/// Value at `r` of the linear constraint functional the witness represents.
double witness_value(ConeKind kind, const Witness& w, const CurvTensor& r);

enum class Classification { Interior, Boundary, Outside };
std::string classification_name(Classification c);

struct MembershipVerdict {
  double margin = 0.0;
  Witness witness;
  Classification classification = Classification::Outside;
  /// Search-based kinds only: some restart hit the iteration budget before converging.
  bool budget_exhausted = false;
  int restarts = 0;
  int restarts_converged = 0;
  /// Local minima of the search (search-based kinds), kept for active-set pooling.
  std::vector<LocalRun> local_minima;
};

MembershipVerdict membership(const ConeSpec& cone, const CurvTensor& r);

struct BoundaryPoint {
  CurvTensor tensor;
  double t = 0.0;
  MembershipVerdict verdict;
  int evaluations = 0;
};

/// Finds t > 0 with margin(r_in + t d) in [-tol, tol]. Root finding on the concave
/// margin: bracketing, then steps to the root of the active linear functional at
/// the outer end, falling back to bisection when a step fails to halve the bracket.
/// Throws NonInteriorStart, RayStaysInside (no exit up to t = 1e6).
BoundaryPoint project_to_boundary(const ConeSpec& cone, const CurvTensor& r_in, const CurvTensor& d);

struct TangentConeVerdict {
  bool contained = false;
  std::vector<Witness> active_set;
  /// Minimum over active witnesses of the constraint value of V; +inf when S is interior.
  double min_directional_value = std::numeric_limits<double>::infinity();
  Classification base_classification = Classification::Interior;
};

/// First-order test of V in the tangent cone of the cone at S. Throws InvalidQuery
/// if S is outside.
TangentConeVerdict tangent_cone_contains(const ConeSpec& cone, const CurvTensor& s, const CurvTensor& v);

struct ConditionIIIFailure {
  int sample = 0;
  double scalar_ratio = 0.0;
  double ricci_ratio = 0.0;
};

struct ConditionIIIReport {
  int samples = 0;
  int pass = 0;
  int fail = 0;
  double worst_scalar_ratio = std::numeric_limits<double>::infinity();  // min scalar / norm
  double worst_ricci_ratio = std::numeric_limits<double>::infinity();   // min |Ric| / norm
  std::vector<ConditionIIIFailure> failures;
};

/// Nonzero cone elements have scalar >= -1e-9 norm and |Ric| > 1e-9 norm.
/// Samples come from random_in_cone. Cone must be NIC or NonnegCurvOp.
ConditionIIIReport check_condition_iii(const ConeSpec& cone, int samples, std::uint64_t seed);

struct ConditionIVReport {
  bool pass = false;
  double margin = 0.0;
  double expected_margin = 0.0;
  Classification classification = Classification::Outside;
};

/// The identity tensor is interior with margin >= 1 - tol.
ConditionIVReport check_condition_iv(const ConeSpec& cone);

struct InvarianceOptions {
  int trials = 200;
  std::uint64_t seed = 0;
  int trajectories = 0;
  double trajectory_t_end = 0.5;
  int trajectory_samples = 10;
  /// Failure threshold for min_directional_value and trajectory margins; <= 0 means 10 * tol.
  double violation_tol = 0.0;
};

struct InvarianceWitness {
  std::string source;  // "boundary" or "trajectory"
  int index = 0;
  double value = 0.0;
  Witness witness;
};

struct InvarianceReport {
  int trials = 0;
  int pass = 0;
  int fail = 0;
  double worst = std::numeric_limits<double>::infinity();
  double violation_tol = 0.0;
  int trajectories = 0;
  int trajectory_pass = 0;
  int trajectory_fail = 0;
  double trajectory_worst_margin = std::numeric_limits<double>::infinity();
  std::vector<InvarianceWitness> witnesses;
};

/// Samples boundary points S along random exit rays from I and tests Q(S) against
/// the tangent cone at S; optionally follows normalized flows from interior points
/// and tracks the margin.
InvarianceReport invariance_check(const ConeSpec& cone, const InvarianceOptions& opts);

}  // namespace curvlab
