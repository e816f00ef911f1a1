#pragma once

// Algebraic curvature tensors on R^n in an orthonormal frame (metric = identity).

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "curvlab/error.hpp"

namespace curvlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense n^4 array of reals with no symmetry guarantees.
class Tensor4 {
 public:
  explicit Tensor4(int dim);

  int dim() const noexcept { return dim_; }

  double& operator()(int i, int j, int k, int l) noexcept { return data_[offset(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const noexcept { return data_[offset(i, j, k, l)]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  /// Largest absolute entry.
  double max_abs() const noexcept;

 private:
  std::size_t offset(int i, int j, int k, int l) const noexcept {
    const auto n = static_cast<std::size_t>(dim_);
    return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
  }

  int dim_;
  std::vector<double> data_;
};

/// An element of the space of algebraic curvature tensors: antisymmetric in
/// each index pair, symmetric under pair exchange, satisfies the first Bianchi
/// identity. Sign convention: the unit sphere has R_{ijij} = +1.
class CurvTensor {
 public:
  static CurvTensor zero(int dim);

  /// Wraps components the caller guarantees to carry all curvature symmetries.
  /// Use project_bianchi() for anything not exact by construction.
  static CurvTensor assume_valid(Tensor4 components);

  int dim() const noexcept { return t_.dim(); }
  double operator()(int i, int j, int k, int l) const noexcept { return t_(i, j, k, l); }
  const Tensor4& components() const noexcept { return t_; }

  CurvTensor& operator+=(const CurvTensor& other);
  CurvTensor& operator-=(const CurvTensor& other);
  CurvTensor& operator*=(double s) noexcept;

  friend CurvTensor operator+(CurvTensor a, const CurvTensor& b) { return a += b; }
  friend CurvTensor operator-(CurvTensor a, const CurvTensor& b) { return a -= b; }
  friend CurvTensor operator*(double s, CurvTensor a) { return a *= s; }
  friend CurvTensor operator*(CurvTensor a, double s) { return a *= s; }
  friend CurvTensor operator-(CurvTensor a) { return a *= -1.0; }

 private:
  explicit CurvTensor(Tensor4 t) : t_(std::move(t)) {}
  Tensor4 t_;
};

/// Real symmetric matrix; holds Ricci tensors, metrics and curvature-operator matrices.
class SymMatrix {
 public:
  /// Throws SymmetryViolation when `m` is not symmetric to 1e-12 relative; the
  /// stored matrix is the exact symmetrization.
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(int dim);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  double operator()(int a, int b) const noexcept { return m_(a, b); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

/// Ordered orthonormal 4-frame in R^n (n >= 4), stored as the columns of an n x 4 matrix.
class Frame4 {
 public:
  /// Throws InvalidFrame unless the columns are orthonormal within 1e-12.
  explicit Frame4(const Matrix& columns);

  int dim() const noexcept { return static_cast<int>(cols_.rows()); }
  const Matrix& columns() const noexcept { return cols_; }
  Vector column(int a) const { return cols_.col(a); }

 private:
  Matrix cols_;
};

struct RicciParts {
  CurvTensor scalar_part;
  CurvTensor traceless_ricci_part;
  CurvTensor weyl_part;
};

CurvTensor identity_tensor(int n);

/// Removes the totally antisymmetric part: b(T) = T - (T_ijkl + T_iklj + T_iljk)/3.
/// Throws SymmetryViolation if T lacks the pair antisymmetries or pair symmetry.
CurvTensor project_bianchi(const Tensor4& t);

/// Averages T over the 8-element group generated by the two antisymmetries and
/// pair exchange. Output has those symmetries exactly but not necessarily Bianchi.
Tensor4 symmetrize_pairs(const Tensor4& t);

/// Max entrywise defect of the pair antisymmetries, the pair symmetry and the
/// first Bianchi identity.
struct SymmetryDefects {
  double antisymmetry = 0.0;
  double pair_symmetry = 0.0;
  double bianchi = 0.0;
};
SymmetryDefects symmetry_defects(const Tensor4& t);

SymMatrix ricci(const CurvTensor& r);
double scalar(const CurvTensor& r);

CurvTensor kulkarni_nomizu(const SymMatrix& h, const SymMatrix& k);

/// Orthogonal split R = scalar + traceless-Ricci + Weyl. For n = 3 the Weyl part is zero.
RicciParts ricci_decomposition(const CurvTensor& r);

/// R(x, y, z, w) = sum R_ijkl x_i y_j z_k w_l.
double multilinear(const CurvTensor& r, const Vector& x, const Vector& y, const Vector& z,
                   const Vector& w);

/// Sectional curvature R(u, v, u, v); throws InvalidPlane unless u, v are orthonormal.
double sectional(const CurvTensor& r, const Vector& u, const Vector& v);

/// Index of the lexicographic pair (i, j), i < j, among the n(n-1)/2 bivectors.
int pair_index(int i, int j, int n) noexcept;

/// Matrix of the curvature operator on bivectors: entry[(i,j),(k,l)] = R_ijkl,
/// lexicographic pairs i < j, unweighted basis (I maps to the identity).
SymMatrix curv_operator_matrix(const CurvTensor& r);

/// R_1313 + R_1414 + R_2323 + R_2424 - 2 R_1234 evaluated on the frame.
double isotropic_curvature(const CurvTensor& r, const Frame4& f);

double inner(const CurvTensor& a, const CurvTensor& b);
double norm(const CurvTensor& r);

/// Pullback action (g.R)_ijkl = sum g_ia g_jb g_kc g_ld R_abcd.
CurvTensor rotate(const CurvTensor& r, const Matrix& g);

}  // namespace curvlab
