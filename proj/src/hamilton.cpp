#include "curvlab/hamilton.hpp"

#include <algorithm>
#include <cmath>

#include "curvlab/kernels.hpp"

namespace curvlab {

namespace {

QResult finish_q(const Tensor4& raw) {
  CurvTensor projected = project_bianchi(raw);
  double diff = 0.0, total = 0.0;
  auto a = raw.data();
  auto b = projected.components().data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    total += a[i] * a[i];
  }
  const double residual = total > 0.0 ? std::sqrt(diff / total) : 0.0;
  return {std::move(projected), residual};
}

bool all_finite(const CurvTensor& r) {
  for (double v : r.components().data())
    if (!std::isfinite(v)) return false;
  return true;
}

CurvTensor rk4_step(const CurvTensor& y, double h) {
  const CurvTensor k1 = q_term(y);
  const CurvTensor k2 = q_term(y + (0.5 * h) * k1);
  const CurvTensor k3 = q_term(y + (0.5 * h) * k2);
  const CurvTensor k4 = q_term(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

class Recorder {
 public:
  Recorder(TrajectoryRecord& rec, int every) : rec_(rec), every_(std::max(1, every)) {}

  void accept(double t, const CurvTensor& y, double h) {
    rec_.diagnostics.push_back({t, norm(y), scalar(y), h});
    ++accepted_;
    if (accepted_ % every_ == 0) push(t, y);
  }

  void push(double t, const CurvTensor& y) {
    if (!rec_.times.empty() && rec_.times.back() >= t) return;
    rec_.times.push_back(t);
    rec_.tensors.push_back(y);
  }

 private:
  TrajectoryRecord& rec_;
  int every_;
  long accepted_ = 0;
};

}  // namespace

QResult q_term_checked(const CurvTensor& r) { return finish_q(kernels::q_raw_parallel(r)); }

CurvTensor q_term(const CurvTensor& r) { return q_term_checked(r).tensor; }

CurvTensor q_term_reference(const CurvTensor& r) { return finish_q(kernels::q_raw_reference(r)).tensor; }

TrajectoryRecord integrate(const CurvTensor& r0, const FlowOptions& opts) {
  if (!(opts.step > 0.0) || !(opts.t_end > 0.0)) {
    throw CurvError(ErrorCode::UsageError, "flow step and t_end must be positive");
  }
  const double scal0 = scalar(r0);
  if (opts.normalized && !(scal0 > 0.0)) {
    throw CurvError(ErrorCode::InvalidNormalization, "normalized flow requires positive initial scalar curvature");
  }
  if (!all_finite(r0)) throw CurvError(ErrorCode::NumericFailure, "initial tensor has non-finite entries");

  TrajectoryRecord rec;
  Recorder recorder(rec, opts.sample_every);
  recorder.push(0.0, r0);

  auto renormalize = [&](CurvTensor& y) {
    if (!opts.normalized) return;
    const double s = scalar(y);
    if (!(s > 0.0)) throw CurvError(ErrorCode::NumericFailure, "scalar curvature left the positive range");
    y *= scal0 / s;
  };

  CurvTensor y = r0;
  double t = 0.0;
  double h = std::min(opts.step, opts.t_end);
  long steps = 0;

  while (t < opts.t_end) {
    if (++steps > opts.max_steps) throw CurvError(ErrorCode::BudgetExhausted, "flow step budget exhausted");
    const double remaining = opts.t_end - t;
    const bool last = h >= remaining * (1.0 - 1e-14);
    const double h_try = last ? remaining : h;

    CurvTensor next = CurvTensor::zero(y.dim());
    double h_next = h;
    if (opts.method == FlowMethod::Rk4Fixed) {
      next = rk4_step(y, h_try);
    } else {
      const CurvTensor full = rk4_step(y, h_try);
      const CurvTensor half = rk4_step(rk4_step(y, 0.5 * h_try), 0.5 * h_try);
      const CurvTensor diff = half - full;
      const double scale = std::max(norm(half), 1e-300);
      const double err = norm(diff) / (15.0 * opts.rel_tol * scale);
      if (!std::isfinite(err)) throw CurvError(ErrorCode::NumericFailure, "non-finite error estimate");
      const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h_next = h_try * std::clamp(factor, 0.2, 5.0);
      if (err > 1.0) {
        ++rec.rejected_steps;
        h = h_next;
        if (h < 1e-15 * std::max(1.0, t)) {
          // Step collapse only happens at a finite-time singularity of the quadratic ODE.
          rec.status = FlowStatus::BlowupDetected;
          recorder.push(t, y);
          return rec;
        }
        continue;
      }
      next = half + (1.0 / 15.0) * diff;
    }
    if (!all_finite(next)) throw CurvError(ErrorCode::NumericFailure, "non-finite state during flow");

    t = last ? opts.t_end : t + h_try;
    y = std::move(next);
    renormalize(y);
    recorder.accept(t, y, h_try);
    if (opts.method == FlowMethod::Rk4Adaptive && !last) h = h_next;

    if (norm(y) > opts.blowup_threshold) {
      rec.status = FlowStatus::BlowupDetected;
      recorder.push(t, y);
      return rec;
    }
  }
  recorder.push(t, y);
  return rec;
}

double fixed_point_residual(const CurvTensor& r) {
  const int n = r.dim();
  if (n < 4) throw CurvError(ErrorCode::InvalidDimension, "fixed_point_residual requires n >= 4");
  const double nr = norm(r);
  return norm(q_term(r) - (2.0 * (n - 1)) * r) / std::max(1.0, nr * nr);
}

std::string flow_method_name(FlowMethod m) {
  return m == FlowMethod::Rk4Fixed ? "rk4_fixed" : "rk4_adaptive";
}

FlowMethod parse_flow_method(const std::string& name) {
  if (name == "rk4_fixed") return FlowMethod::Rk4Fixed;
  if (name == "rk4_adaptive") return FlowMethod::Rk4Adaptive;
  throw CurvError(ErrorCode::UsageError, "unknown flow method '" + name + "'");
}

std::string flow_status_name(FlowStatus s) {
  return s == FlowStatus::Completed ? "completed" : "blowup_detected";
}

}  // namespace curvlab
