#include "curvlab/rigidity.hpp"

#include <cmath>

#include "curvlab/hamilton.hpp"

namespace curvlab {

namespace {

constexpr int kBisectionSteps = 80;
constexpr double kKappaHi = 2.0;

void require_normalized(const CurvTensor& r, double rel_tol) {
  if (einstein_residual(r) > rel_tol * std::max(1.0, norm(r))) {
    throw CurvError(ErrorCode::NotNormalized, "tensor is not a normalized Einstein tensor (Ric = (n-1) delta)");
  }
}

}  // namespace

double einstein_residual(const CurvTensor& r) {
  const int n = r.dim();
  return (ricci(r).matrix() - (n - 1.0) * Matrix::Identity(n, n)).norm();
}

CurvTensor normalize_einstein(const CurvTensor& r) {
  const int n = r.dim();
  const Matrix ric = ricci(r).matrix();
  const double scal = ric.trace();
  const double nr = norm(r);
  if ((ric - (scal / n) * Matrix::Identity(n, n)).norm() > 1e-8 * nr) {
    throw CurvError(ErrorCode::NotEinstein, "Ricci tensor is not a multiple of the metric");
  }
  if (!(scal > 0.0)) {
    throw CurvError(ErrorCode::NonpositiveScalar,
                    "Einstein constant is not positive (Ricci-flat or negative branch is not processed)");
  }
  return ((n - 1.0) * n / scal) * r;
}

CurvTensor pinching_tensor(const CurvTensor& r, double kappa) { return r - kappa * identity_tensor(r.dim()); }

KappaResult kappa_star(const ConeSpec& cone, const CurvTensor& r) {
  require_normalized(r, 1e-8);
  const MembershipVerdict base = membership(cone, r);
  KappaResult out;
  out.closed_form = base.margin / identity_margin(cone.kind, r.dim());
  if (base.classification == Classification::Outside) {
    throw CurvError(ErrorCode::InvalidQuery, "tensor lies outside the cone; kappa* is undefined");
  }
  if (base.classification == Classification::Boundary) {
    out.boundary_input = true;
    out.kappa = 0.0;
    out.at_kappa = base;
    return out;
  }

  double lo = 0.0;
  double hi = kKappaHi;
  MembershipVerdict at_lo = base;
  MembershipVerdict at_hi = membership(cone, pinching_tensor(r, hi));
  if (at_hi.margin >= 0.0) {
    // Past the headroom: report the endpoint so the bound violation is visible.
    out.kappa = hi;
    out.at_kappa = std::move(at_hi);
  } else {
    for (int step = 0; step < kBisectionSteps; ++step) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      MembershipVerdict v = membership(cone, pinching_tensor(r, mid));
      if (v.margin >= 0.0) {
        lo = mid;
        at_lo = std::move(v);
      } else {
        hi = mid;
      }
    }
    out.kappa = lo;
    out.at_kappa = std::move(at_lo);
  }
  if (std::abs(out.kappa - out.closed_form) > 1e-5) {
    throw CurvError(ErrorCode::SearchInconsistency, "kappa* bisection " + std::to_string(out.kappa) +
                                                        " disagrees with closed form " + std::to_string(out.closed_form));
  }
  return out;
}

double eq3_residual(const CurvTensor& r, double kappa) {
  require_normalized(r, 1e-9);
  const int n = r.dim();
  const CurvTensor lhs = q_term(pinching_tensor(r, kappa));
  const CurvTensor rhs = q_term(r) + (2.0 * (n - 1) * kappa * (kappa - 2.0)) * identity_tensor(n);
  const double nr = norm(r);
  return norm(lhs - rhs) / std::max(1.0, nr * nr);
}

double prop1_residual_symmetric(const CurvTensor& r, double kappa) {
  if (r.dim() < 4 || fixed_point_residual(r) > 1e-9 || einstein_residual(r) > 1e-8 * std::max(1.0, norm(r))) {
    throw CurvError(ErrorCode::NotSymmetricModel,
                    "requires a normalized Einstein tensor with Q(R) = 2(n-1) R");
  }
  const int n = r.dim();
  const CurvTensor s = pinching_tensor(r, kappa);
  const CurvTensor rhs = (2.0 * (n - 1)) * s + (2.0 * (n - 1) * kappa * (kappa - 1.0)) * identity_tensor(n);
  const double nr = norm(r);
  return norm(q_term(s) - rhs) / std::max(1.0, nr * nr);
}

std::string verdict_name(RigidityVerdict v) {
  switch (v) {
    case RigidityVerdict::ConstantCurvature: return "constant_curvature";
    case RigidityVerdict::BoundaryModel: return "boundary_model";
    case RigidityVerdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

RigidityReport rigidity_probe(const ConeSpec& cone_in, const CurvTensor& r, const std::string& input_id) {
  ConeSpec cone = cone_in;
  cone.dim = r.dim();
  validate(cone);

  RigidityReport rep;
  rep.input_id = input_id;
  rep.cone = cone.kind;
  rep.dim = r.dim();

  const CurvTensor normalized = normalize_einstein(r);
  rep.scale_factor = norm(r) > 0.0 ? norm(normalized) / norm(r) : 1.0;
  rep.einstein_residual = einstein_residual(normalized);
  rep.fixed_point_residual = fixed_point_residual(normalized);

  const KappaResult k = kappa_star(cone, normalized);
  rep.kappa_star = k.kappa;
  rep.kappa_closed_form = k.closed_form;
  rep.at_kappa_star = k.at_kappa;

  const CurvTensor s = pinching_tensor(normalized, k.kappa);
  rep.s_norm = norm(s);
  rep.eq3_residual = eq3_residual(normalized, k.kappa);
  if (rep.fixed_point_residual <= 1e-9) rep.prop1_residual_symmetric = prop1_residual_symmetric(normalized, k.kappa);

  if (rep.s_norm <= 1e-6 * norm(normalized)) {
    rep.verdict = RigidityVerdict::ConstantCurvature;
  } else if (k.boundary_input || k.kappa <= 1e-8) {
    rep.verdict = RigidityVerdict::BoundaryModel;
  } else {
    rep.verdict = RigidityVerdict::Inconclusive;
  }
  return rep;
}

}  // namespace curvlab
