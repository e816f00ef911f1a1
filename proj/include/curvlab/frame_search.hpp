#pragma once

// Multistart Riemannian descent over orthonormal p-frames (the Stiefel manifold)
// for functionals that are quadratic forms of the curvature operator on a
// bivector built from the frame.

#include <cstdint>
#include <span>
#include <vector>

#include "curvlab/tensor.hpp"

namespace curvlab {

struct SearchOptions {
  int restarts = 64;
  int max_iters = 500;
  double step_tol = 1e-12;  // relative to norm(R)
  std::uint64_t seed = 0;
  bool parallel = true;
};

/// Frame functional evaluated through the curvature-operator matrix M:
///  - isotropic (p = 4): a^T M a + b^T M b with a = e1^e3 - e2^e4, b = e1^e4 + e2^e3,
///    which equals R_1313 + R_1414 + R_2323 + R_2424 - 2 R_1234;
///  - sectional (p = 2): w^T M w with w = e1^e2.
class BivectorFunctional {
 public:
  enum class Kind { Isotropic, Sectional };

  BivectorFunctional(const CurvTensor& r, Kind kind);

  int dim() const noexcept { return n_; }
  int columns() const noexcept { return kind_ == Kind::Isotropic ? 4 : 2; }
  /// Frobenius norm of R; the natural scale for gradient tolerances.
  double scale() const noexcept { return scale_; }

  double value(const Matrix& frame) const;
  /// Returns the value and writes the Euclidean gradient (n x p) into `grad`.
  double value_and_gradient(const Matrix& frame, Matrix& grad) const;

 private:
  Vector wedge(const Vector& x, const Vector& y) const;
  Matrix antisym(const Vector& pairs) const;

  Kind kind_;
  int n_;
  Matrix op_;
  double scale_;
};

struct LocalRun {
  double value = 0.0;
  Matrix frame;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
};

struct SearchResult {
  double value = 0.0;  // best value over all runs
  Matrix frame;        // frame attaining it
  std::vector<LocalRun> runs;
  bool all_converged = true;
  long total_iterations = 0;
};

/// Orthonormalizes the columns (QR with positive diagonal, i.e. Gram-Schmidt order).
Matrix orthonormalize(const Matrix& a);

/// Riemannian gradient on the Stiefel manifold with the embedded metric.
Matrix stiefel_project(const Matrix& frame, const Matrix& euclidean_grad);

/// One descent run: projected gradient, QR retraction, Armijo backtracking
/// from a Barzilai-Borwein trial step.
LocalRun descend(const BivectorFunctional& f, Matrix start, const SearchOptions& opts);

/// Restart r starts from an orthonormalized Gaussian matrix drawn from substream
/// (seed, restart); warm starts run after the random ones. The reduction picks
/// the lowest value, ties broken by run index, so results do not depend on the
/// thread schedule.
SearchResult minimize_over_frames(const BivectorFunctional& f, const SearchOptions& opts,
                                  std::span<const Matrix> warm_starts = {});

/// Multistart minimum of isotropic curvature over orthonormal 4-frames (n >= 4).
/// The value is an upper bound on the true minimum.
SearchResult min_isotropic(const CurvTensor& r, const SearchOptions& opts,
                           std::span<const Matrix> warm_starts = {});

/// Multistart minimum of sectional curvature over 2-planes.
SearchResult min_sectional(const CurvTensor& r, const SearchOptions& opts,
                           std::span<const Matrix> warm_starts = {});

}  // namespace curvlab
