#include "curvlab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace curvlab {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw CurvError(ErrorCode::DimMismatch,
                    std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

Tensor4::Tensor4(int dim) : dim_(dim) {
  if (dim < 1) throw CurvError(ErrorCode::InvalidDimension, "tensor dimension must be positive");
  const auto n = static_cast<std::size_t>(dim);
  data_.assign(n * n * n * n, 0.0);
}

double Tensor4::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

CurvTensor CurvTensor::zero(int dim) { return CurvTensor(Tensor4(dim)); }

CurvTensor CurvTensor::assume_valid(Tensor4 components) { return CurvTensor(std::move(components)); }

CurvTensor& CurvTensor::operator+=(const CurvTensor& other) {
  require_same_dim(dim(), other.dim(), "tensor sum");
  auto lhs = t_.data();
  auto rhs = other.t_.data();
  for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] += rhs[i];
  return *this;
}

CurvTensor& CurvTensor::operator-=(const CurvTensor& other) {
  require_same_dim(dim(), other.dim(), "tensor difference");
  auto lhs = t_.data();
  auto rhs = other.t_.data();
  for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= rhs[i];
  return *this;
}

CurvTensor& CurvTensor::operator*=(double s) noexcept {
  for (double& v : t_.data()) v *= s;
  return *this;
}

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw CurvError(ErrorCode::DimMismatch, "symmetric matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw CurvError(ErrorCode::SymmetryViolation, "matrix is not symmetric");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(int dim) { return SymMatrix(Matrix::Identity(dim, dim)); }

Frame4::Frame4(const Matrix& columns) : cols_(columns) {
  if (cols_.cols() != 4 || cols_.rows() < 4) {
    throw CurvError(ErrorCode::InvalidFrame, "a 4-frame needs 4 columns in dimension >= 4");
  }
  const Matrix gram = cols_.transpose() * cols_;
  if ((gram - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() > 1e-12) {
    throw CurvError(ErrorCode::InvalidFrame, "frame columns are not orthonormal");
  }
}

CurvTensor identity_tensor(int n) {
  if (n < 3) throw CurvError(ErrorCode::InvalidDimension, "identity tensor requires n >= 3");
  Tensor4 t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      t(i, j, i, j) = 1.0;
      t(i, j, j, i) = -1.0;
    }
  return CurvTensor::assume_valid(std::move(t));
}

Tensor4 symmetrize_pairs(const Tensor4& t) {
  const int n = t.dim();
  Tensor4 s(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          s(i, j, k, l) = (t(i, j, k, l) - t(j, i, k, l) - t(i, j, l, k) + t(j, i, l, k) +
                           t(k, l, i, j) - t(l, k, i, j) - t(k, l, j, i) + t(l, k, j, i)) /
                          8.0;
        }
  return s;
}

SymmetryDefects symmetry_defects(const Tensor4& t) {
  const int n = t.dim();
  SymmetryDefects d;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = t(i, j, k, l);
          d.antisymmetry = std::max({d.antisymmetry, std::abs(v + t(j, i, k, l)), std::abs(v + t(i, j, l, k))});
          d.pair_symmetry = std::max(d.pair_symmetry, std::abs(v - t(k, l, i, j)));
          d.bianchi = std::max(d.bianchi, std::abs(v + t(i, k, l, j) + t(i, l, j, k)));
        }
  return d;
}

CurvTensor project_bianchi(const Tensor4& t) {
  const SymmetryDefects d = symmetry_defects(t);
  const double scale = std::max(1.0, t.max_abs());
  if (d.antisymmetry > 1e-12 * scale || d.pair_symmetry > 1e-12 * scale) {
    throw CurvError(ErrorCode::SymmetryViolation,
                    "input lacks pair antisymmetry or pair symmetry (defect " +
                        std::to_string(std::max(d.antisymmetry, d.pair_symmetry)) + ")");
  }
  const int n = t.dim();
  Tensor4 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double cyclic = t(i, j, k, l) + t(i, k, l, j) + t(i, l, j, k);
          out(i, j, k, l) = t(i, j, k, l) - cyclic / 3.0;
        }
  return CurvTensor::assume_valid(std::move(out));
}

SymMatrix ricci(const CurvTensor& r) {
  const int n = r.dim();
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) m(i, k) += r(i, j, k, j);
  return SymMatrix(m);
}

double scalar(const CurvTensor& r) { return ricci(r).matrix().trace(); }

CurvTensor kulkarni_nomizu(const SymMatrix& h, const SymMatrix& k) {
  require_same_dim(h.dim(), k.dim(), "kulkarni_nomizu");
  const int n = h.dim();
  Tensor4 t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          t(i, j, a, b) = h(i, a) * k(j, b) + h(j, b) * k(i, a) - h(i, b) * k(j, a) - h(j, a) * k(i, b);
        }
  return CurvTensor::assume_valid(std::move(t));
}

RicciParts ricci_decomposition(const CurvTensor& r) {
  const int n = r.dim();
  if (n < 3) throw CurvError(ErrorCode::InvalidDimension, "Ricci decomposition requires n >= 3");
  const SymMatrix ric = ricci(r);
  const double scal = ric.matrix().trace();
  const SymMatrix id = SymMatrix::identity(n);

  CurvTensor scalar_part = (scal / (2.0 * n * (n - 1))) * kulkarni_nomizu(id, id);
  const SymMatrix traceless(ric.matrix() - (scal / n) * Matrix::Identity(n, n));
  CurvTensor traceless_part = (1.0 / (n - 2)) * kulkarni_nomizu(traceless, id);
  CurvTensor weyl = CurvTensor::zero(n);
  if (n > 3) weyl = r - scalar_part - traceless_part;
  return {std::move(scalar_part), std::move(traceless_part), std::move(weyl)};
}

double multilinear(const CurvTensor& r, const Vector& x, const Vector& y, const Vector& z,
                   const Vector& w) {
  const int n = r.dim();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double xy = x[i] * y[j];
      if (xy == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        double row = 0.0;
        for (int l = 0; l < n; ++l) row += r(i, j, k, l) * w[l];
        total += xy * z[k] * row;
      }
    }
  }
  return total;
}

double sectional(const CurvTensor& r, const Vector& u, const Vector& v) {
  if (u.size() != r.dim() || v.size() != r.dim()) {
    throw CurvError(ErrorCode::InvalidPlane, "plane vectors must live in the tensor's dimension");
  }
  if (std::abs(u.squaredNorm() - 1.0) > 1e-10 || std::abs(v.squaredNorm() - 1.0) > 1e-10 ||
      std::abs(u.dot(v)) > 1e-10) {
    throw CurvError(ErrorCode::InvalidPlane, "u, v must be orthonormal");
  }
  return multilinear(r, u, v, u, v);
}

int pair_index(int i, int j, int n) noexcept {
  // pairs (0,1),(0,2),...,(0,n-1),(1,2),...
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

SymMatrix curv_operator_matrix(const CurvTensor& r) {
  const int n = r.dim();
  const int np = n * (n - 1) / 2;
  Matrix m(np, np);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) m(pair_index(i, j, n), pair_index(k, l, n)) = r(i, j, k, l);
  return SymMatrix(m);
}

double isotropic_curvature(const CurvTensor& r, const Frame4& f) {
  if (f.dim() != r.dim()) throw CurvError(ErrorCode::InvalidFrame, "frame dimension differs from tensor");
  const Vector e1 = f.column(0), e2 = f.column(1), e3 = f.column(2), e4 = f.column(3);
  return multilinear(r, e1, e3, e1, e3) + multilinear(r, e1, e4, e1, e4) + multilinear(r, e2, e3, e2, e3) +
         multilinear(r, e2, e4, e2, e4) - 2.0 * multilinear(r, e1, e2, e3, e4);
}

double inner(const CurvTensor& a, const CurvTensor& b) {
  require_same_dim(a.dim(), b.dim(), "inner");
  auto x = a.components().data();
  auto y = b.components().data();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm(const CurvTensor& r) { return std::sqrt(inner(r, r)); }

CurvTensor rotate(const CurvTensor& r, const Matrix& g) {
  const int n = r.dim();
  if (g.rows() != n || g.cols() != n) throw CurvError(ErrorCode::DimMismatch, "rotation size");
  // Four successive single-index contractions, each O(n^5).
  Tensor4 a = r.components();
  Tensor4 b(n);
  for (int slot = 0; slot < 4; ++slot) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double s = 0.0;
            for (int m = 0; m < n; ++m) {
              switch (slot) {
                case 0: s += g(i, m) * a(m, j, k, l); break;
                case 1: s += g(j, m) * a(i, m, k, l); break;
                case 2: s += g(k, m) * a(i, j, m, l); break;
                default: s += g(l, m) * a(i, j, k, m); break;
              }
            }
            b(i, j, k, l) = s;
          }
    std::swap(a, b);
  }
  return CurvTensor::assume_valid(std::move(a));
}

}  // namespace curvlab
