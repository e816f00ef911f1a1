#include "curvlab/frame_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvlab/rng.hpp"

namespace curvlab {

BivectorFunctional::BivectorFunctional(const CurvTensor& r, Kind kind)
    : kind_(kind), n_(r.dim()), op_(curv_operator_matrix(r).matrix()), scale_(norm(r)) {
  if (kind_ == Kind::Isotropic && n_ < 4) {
    throw CurvError(ErrorCode::InvalidDimension, "isotropic curvature needs n >= 4");
  }
  if (kind_ == Kind::Sectional && n_ < 2) {
    throw CurvError(ErrorCode::InvalidDimension, "sectional curvature needs n >= 2");
  }
}

Vector BivectorFunctional::wedge(const Vector& x, const Vector& y) const {
  Vector w(n_ * (n_ - 1) / 2);
  int p = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) w[p++] = x[i] * y[j] - x[j] * y[i];
  return w;
}

Matrix BivectorFunctional::antisym(const Vector& pairs) const {
  Matrix u = Matrix::Zero(n_, n_);
  int p = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      u(i, j) = pairs[p];
      u(j, i) = -pairs[p];
      ++p;
    }
  return u;
}

double BivectorFunctional::value(const Matrix& frame) const {
  if (kind_ == Kind::Sectional) {
    const Vector w = wedge(frame.col(0), frame.col(1));
    return w.dot(op_ * w);
  }
  const Vector a = wedge(frame.col(0), frame.col(2)) - wedge(frame.col(1), frame.col(3));
  const Vector b = wedge(frame.col(0), frame.col(3)) + wedge(frame.col(1), frame.col(2));
  return a.dot(op_ * a) + b.dot(op_ * b);
}

double BivectorFunctional::value_and_gradient(const Matrix& frame, Matrix& grad) const {
  grad.resize(n_, columns());
  // d(w^T M w) for w = x^y is 2 (U y) dx - 2 (U x) dy with U = antisym(M w).
  if (kind_ == Kind::Sectional) {
    const Vector w = wedge(frame.col(0), frame.col(1));
    const Vector mw = op_ * w;
    const Matrix u = antisym(mw);
    grad.col(0) = 2.0 * u * frame.col(1);
    grad.col(1) = -2.0 * u * frame.col(0);
    return w.dot(mw);
  }
  const Vector a = wedge(frame.col(0), frame.col(2)) - wedge(frame.col(1), frame.col(3));
  const Vector b = wedge(frame.col(0), frame.col(3)) + wedge(frame.col(1), frame.col(2));
  const Vector ma = op_ * a;
  const Vector mb = op_ * b;
  const Matrix ua = antisym(ma);
  const Matrix ub = antisym(mb);
  const auto e1 = frame.col(0), e2 = frame.col(1), e3 = frame.col(2), e4 = frame.col(3);
  grad.col(0) = 2.0 * (ua * e3 + ub * e4);
  grad.col(1) = 2.0 * (-ua * e4 + ub * e3);
  grad.col(2) = 2.0 * (-ua * e1 - ub * e2);
  grad.col(3) = 2.0 * (ua * e2 - ub * e1);
  return a.dot(ma) + b.dot(mb);
}

Matrix orthonormalize(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  const auto diag = qr.matrixQR().diagonal();
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    if (diag[c] < 0.0) q.col(c) = -q.col(c);
  return q;
}

Matrix stiefel_project(const Matrix& frame, const Matrix& euclidean_grad) {
  const Matrix ftg = frame.transpose() * euclidean_grad;
  return euclidean_grad - frame * (0.5 * (ftg + ftg.transpose()));
}

LocalRun descend(const BivectorFunctional& f, Matrix start, const SearchOptions& opts) {
  constexpr double kArmijo = 1e-4;
  // Below this relative gradient norm a failed line search is a round-off floor,
  // not a failure to converge.
  constexpr double kStallTol = 1e-7;

  LocalRun run;
  const double scale = f.scale();
  Matrix frame = orthonormalize(start);
  Matrix grad;
  double value = f.value_and_gradient(frame, grad);
  Matrix xi = stiefel_project(frame, grad);
  double gnorm = xi.norm();

  if (scale == 0.0) {
    run.value = value;
    run.frame = std::move(frame);
    run.converged = true;
    return run;
  }

  double alpha = 0.5 / scale;
  const double alpha_min = 1e-12 / scale;
  const double alpha_max = 1e6 / scale;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    if (gnorm <= opts.step_tol * scale) {
      run.converged = true;
      break;
    }
    Matrix trial, trial_grad;
    double trial_value = 0.0;
    bool accepted = false;
    double step = alpha;
    for (int bt = 0; bt < 60; ++bt) {
      trial = orthonormalize(frame - step * xi);
      trial_value = f.value_and_gradient(trial, trial_grad);
      if (trial_value <= value - kArmijo * step * gnorm * gnorm) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      run.converged = gnorm <= kStallTol * scale;
      break;
    }
    const Matrix trial_xi = stiefel_project(trial, trial_grad);
    const Matrix s = trial - frame;
    const Matrix y = trial_xi - xi;
    const double sy = (s.array() * y.array()).sum();
    alpha = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, alpha_min, alpha_max) : std::min(2.0 * step, alpha_max);

    frame = std::move(trial);
    value = trial_value;
    xi = trial_xi;
    gnorm = xi.norm();
  }
  if (it == opts.max_iters && gnorm <= opts.step_tol * scale) run.converged = true;
  run.value = value;
  run.frame = std::move(frame);
  run.iterations = it;
  run.grad_norm = gnorm;
  return run;
}

SearchResult minimize_over_frames(const BivectorFunctional& f, const SearchOptions& opts,
                                  std::span<const Matrix> warm_starts) {
  const int random_runs = std::max(0, opts.restarts);
  const int total = random_runs + static_cast<int>(warm_starts.size());
  if (total == 0) throw CurvError(ErrorCode::UsageError, "frame search needs at least one start");

  std::vector<LocalRun> runs(static_cast<std::size_t>(total));
  const int n = f.dim();
  const int p = f.columns();

#pragma omp parallel for schedule(dynamic) if (opts.parallel)
  for (int r = 0; r < total; ++r) {
    Matrix start(n, p);
    if (r < random_runs) {
      Rng rng = Rng::stream(opts.seed, {stream_tag::kFrameSearch, static_cast<std::uint64_t>(r)});
      for (int c = 0; c < p; ++c)
        for (int i = 0; i < n; ++i) start(i, c) = rng.normal();
    } else {
      start = warm_starts[static_cast<std::size_t>(r - random_runs)];
    }
    runs[static_cast<std::size_t>(r)] = descend(f, std::move(start), opts);
  }

  SearchResult result;
  result.value = std::numeric_limits<double>::infinity();
  for (const LocalRun& run : runs) {
    if (run.value < result.value) {
      result.value = run.value;
      result.frame = run.frame;
    }
    result.all_converged = result.all_converged && run.converged;
    result.total_iterations += run.iterations;
  }
  result.runs = std::move(runs);
  return result;
}

SearchResult min_isotropic(const CurvTensor& r, const SearchOptions& opts, std::span<const Matrix> warm_starts) {
  return minimize_over_frames(BivectorFunctional(r, BivectorFunctional::Kind::Isotropic), opts, warm_starts);
}

SearchResult min_sectional(const CurvTensor& r, const SearchOptions& opts, std::span<const Matrix> warm_starts) {
  return minimize_over_frames(BivectorFunctional(r, BivectorFunctional::Kind::Sectional), opts, warm_starts);
}

}  // namespace curvlab
