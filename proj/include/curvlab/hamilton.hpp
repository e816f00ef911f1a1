#pragma once

// The quadratic reaction term Q(R) and the ODE dR/dt = Q(R).

#include <string>
#include <vector>

#include "curvlab/tensor.hpp"

namespace curvlab {

struct QResult {
  CurvTensor tensor;
  /// norm(raw - projected) / max(1e-300, norm(raw)); Q of a Bianchi tensor is Bianchi,
  /// so this stays at round-off.
  double bianchi_residual;
};

QResult q_term_checked(const CurvTensor& r);
CurvTensor q_term(const CurvTensor& r);

/// Serial literal evaluation of the formula, kept as the reference implementation.
CurvTensor q_term_reference(const CurvTensor& r);

enum class FlowMethod { Rk4Fixed, Rk4Adaptive };
enum class FlowStatus { Completed, BlowupDetected };

struct FlowOptions {
  FlowMethod method = FlowMethod::Rk4Adaptive;
  double step = 1e-3;  // fixed step, or initial step for the adaptive method
  double t_end = 1.0;
  /// Rescale after every accepted step so the scalar curvature keeps its initial value.
  bool normalized = false;
  double blowup_threshold = 1e12;
  /// Relative local error target for step doubling.
  double rel_tol = 1e-9;
  /// Record a sample every this many accepted steps (first and last always recorded).
  int sample_every = 1;
  /// Safety cap on accepted + rejected steps.
  long max_steps = 50'000'000;
};

struct StepDiagnostic {
  double time;
  double norm;
  double scalar;
  double step;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<CurvTensor> tensors;
  FlowStatus status = FlowStatus::Completed;
  std::vector<StepDiagnostic> diagnostics;  // one per accepted step
  long rejected_steps = 0;
};

/// Classical RK4, fixed or adaptive (step doubling with local extrapolation).
/// Throws InvalidNormalization when normalized with scalar(R0) <= 0 and
/// NumericFailure on non-finite values.
TrajectoryRecord integrate(const CurvTensor& r0, const FlowOptions& opts);

/// norm(Q(R) - 2(n-1) R) / max(1, norm(R)^2): vanishes on Einstein tensors with
/// Ric = (n-1) delta whose curvature is parallel (symmetric-space models).
double fixed_point_residual(const CurvTensor& r);

std::string flow_method_name(FlowMethod m);
FlowMethod parse_flow_method(const std::string& name);
std::string flow_status_name(FlowStatus s);

}  // namespace curvlab
