#include <doctest.h>

#include "curvlab/models.hpp"
#include "curvlab/tensor.hpp"
#include "oracles.hpp"

using namespace curvlab;

namespace {

Tensor4 random_pair_symmetric(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  Tensor4 t(n);
  for (auto& v : t.data()) v = g(gen);
  return symmetrize_pairs(t);
}

SymMatrix random_sym(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = g(gen);
  return SymMatrix(m);
}

double max_diff(const CurvTensor& a, const CurvTensor& b) {
  double d = 0.0;
  for (std::size_t q = 0; q < a.components().data().size(); ++q) {
    d = std::max(d, std::abs(a.components().data()[q] - b.components().data()[q]));
  }
  return d;
}

}  // namespace

TEST_CASE("identity tensor entries and contractions") {
  const CurvTensor i4 = identity_tensor(4);
  CHECK(i4(0, 1, 0, 1) == 1.0);
  CHECK(i4(0, 1, 1, 0) == -1.0);
  CHECK(i4(0, 1, 2, 3) == 0.0);
  CHECK(scalar(i4) == 12.0);
  CHECK(ricci(identity_tensor(5)).matrix().isApprox(4.0 * Matrix::Identity(5, 5)));
  for (int n = 3; n <= 8; ++n) {
    const CurvTensor in = identity_tensor(n);
    CHECK(ricci(in).matrix() == (n - 1.0) * Matrix::Identity(n, n));
    CHECK(scalar(in) == n * (n - 1.0));
    CHECK(oracle::max_defect(in) == 0.0);
  }
  CHECK_THROWS_AS(identity_tensor(2), CurvError);
}

TEST_CASE("inner product of the identity matches brute force") {
  // n^4 sum: each ordered pair i != j contributes I_ijij^2 and I_ijji^2.
  for (int n = 3; n <= 6; ++n) {
    const CurvTensor in = identity_tensor(n);
    CHECK(inner(in, in) == doctest::Approx(oracle::inner(in, in)).epsilon(1e-15));
    CHECK(inner(in, in) == 2.0 * n * (n - 1));
  }
  CHECK(inner(identity_tensor(4), identity_tensor(4)) == 24.0);
  CHECK(norm(CurvTensor::zero(4)) == 0.0);
  const CurvTensor a = random_curvature(5, 1), b = random_curvature(5, 2);
  CHECK(inner(a, b) == inner(b, a));
  CHECK(inner(a, b) == doctest::Approx(oracle::inner(a, b)).epsilon(1e-13));
}

TEST_CASE("bianchi projection") {
  const CurvTensor i4 = identity_tensor(4);
  CHECK(max_diff(project_bianchi(i4.components()), i4) == 0.0);

  Tensor4 eps(4);
  const int perm[24][4] = {{0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 1, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {0, 3, 2, 1},
                           {1, 0, 2, 3}, {1, 0, 3, 2}, {1, 2, 0, 3}, {1, 2, 3, 0}, {1, 3, 0, 2}, {1, 3, 2, 0},
                           {2, 0, 1, 3}, {2, 0, 3, 1}, {2, 1, 0, 3}, {2, 1, 3, 0}, {2, 3, 0, 1}, {2, 3, 1, 0},
                           {3, 0, 1, 2}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 1, 2, 0}, {3, 2, 0, 1}, {3, 2, 1, 0}};
  for (const auto& p : perm) {
    int inv = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) inv += p[a] > p[b];
    eps(p[0], p[1], p[2], p[3]) = inv % 2 ? -1.0 : 1.0;
  }
  CHECK(norm(project_bianchi(eps)) < 1e-15);

  const Tensor4 t = random_pair_symmetric(4, 7);
  const CurvTensor b1 = project_bianchi(t);
  const CurvTensor b2 = project_bianchi(b1.components());
  CHECK(max_diff(b1, b2) < 1e-14);
  CHECK(oracle::max_defect(b1) < 1e-13);

  Tensor4 bad(4);
  bad(0, 1, 2, 3) = 1.0;
  CHECK_THROWS_AS(project_bianchi(bad), CurvError);
}

TEST_CASE("ricci and scalar") {
  CHECK(ricci(3.0 * identity_tensor(5)).matrix().isApprox(12.0 * Matrix::Identity(5, 5)));
  CHECK(scalar(CurvTensor::zero(4)) == 0.0);
  const CurvTensor ps = product_spheres({2, 2}, {3, 3});
  CHECK((ricci(ps).matrix() - oracle::ricci(ps)).norm() < 1e-15);
  CHECK((ricci(ps).matrix() - 3.0 * Matrix::Identity(4, 4)).norm() < 1e-14);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const CurvTensor r = random_curvature(6, s);
    CHECK((ricci(r).matrix() - oracle::ricci(r)).norm() < 1e-14);
  }
  const CurvTensor sr = random_einstein(4, 3) - 0.5 * identity_tensor(4);
  CHECK(scalar(sr) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("kulkarni-nomizu product") {
  const SymMatrix d = SymMatrix::identity(4);
  CHECK(max_diff(kulkarni_nomizu(d, d), 2.0 * identity_tensor(4)) < 1e-15);
  const SymMatrix h = random_sym(4, 1), k = random_sym(4, 2);
  CHECK(max_diff(kulkarni_nomizu(h, k), kulkarni_nomizu(k, h)) < 1e-15);
  const CurvTensor hd = kulkarni_nomizu(h, d);
  CHECK(max_diff(project_bianchi(hd.components()), hd) < 1e-14);
  CHECK(oracle::max_defect(kulkarni_nomizu(h, k)) < 1e-13);
  CHECK_THROWS_AS(kulkarni_nomizu(h, SymMatrix::identity(5)), CurvError);
}

TEST_CASE("ricci decomposition") {
  const RicciParts pi = ricci_decomposition(identity_tensor(4));
  CHECK(max_diff(pi.scalar_part, identity_tensor(4)) < 1e-15);
  CHECK(norm(pi.traceless_ricci_part) < 1e-15);
  CHECK(norm(pi.weyl_part) < 1e-15);
  for (int n : {3, 4, 5, 7}) {
    const CurvTensor r = random_curvature(n, 11 + n);
    const RicciParts p = ricci_decomposition(r);
    const CurvTensor sum = p.scalar_part + p.traceless_ricci_part + p.weyl_part;
    CHECK(max_diff(sum, r) < 1e-11 * norm(r));
    CHECK(oracle::ricci(p.weyl_part).norm() < 1e-12);
    CHECK(std::abs(inner(p.scalar_part, p.traceless_ricci_part)) < 1e-10);
    CHECK(std::abs(inner(p.scalar_part, p.weyl_part)) < 1e-10);
    CHECK(std::abs(inner(p.traceless_ricci_part, p.weyl_part)) < 1e-10);
    if (n == 3) CHECK(norm(p.weyl_part) == 0.0);
  }
}

TEST_CASE("sectional curvature") {
  Vector u = Vector::Zero(4), v = Vector::Zero(4);
  u(0) = 1.0;
  v(2) = 1.0;
  CHECK(sectional(identity_tensor(4), u, v) == doctest::Approx(1.0));
  CHECK(sectional(2.5 * identity_tensor(4), u, v) == doctest::Approx(2.5));
  CHECK(sectional(product_spheres({2, 2}, {1, 1}), u, v) == 0.0);
  std::mt19937_64 gen(3);
  const Matrix f = oracle::random_frame(5, 2, gen);
  const CurvTensor r = random_curvature(5, 9);
  CHECK(sectional(r, f.col(0), f.col(1)) == doctest::Approx(sectional(r, f.col(1), f.col(0))).epsilon(1e-13));
  CHECK(sectional(r, f.col(0), f.col(1)) ==
        doctest::Approx(oracle::eval4(r, f.col(0), f.col(1), f.col(0), f.col(1))).epsilon(1e-12));
  CHECK_THROWS_AS(sectional(r, f.col(0), 2.0 * f.col(1)), CurvError);
}

TEST_CASE("curvature operator matrix") {
  CHECK(curv_operator_matrix(identity_tensor(4)).matrix() == Matrix::Identity(6, 6));
  CHECK(curv_operator_matrix(3.0 * identity_tensor(5)).matrix().isApprox(3.0 * Matrix::Identity(10, 10)));
  const Matrix m = curv_operator_matrix(product_spheres({2, 2}, {1, 1})).matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Vector ev = es.eigenvalues();
  CHECK(ev(0) == doctest::Approx(0.0));
  CHECK(ev(3) == doctest::Approx(0.0));
  CHECK(ev(4) == doctest::Approx(1.0));
  CHECK(ev(5) == doctest::Approx(1.0));
  CHECK(m(pair_index(0, 1, 4), pair_index(0, 1, 4)) == 1.0);
  CHECK(m(pair_index(2, 3, 4), pair_index(2, 3, 4)) == 1.0);
  CHECK(pair_index(0, 1, 4) == 0);
  CHECK(pair_index(2, 3, 4) == 5);
}

TEST_CASE("isotropic curvature") {
  std::mt19937_64 gen(5);
  for (int n : {4, 6}) {
    const Frame4 f(oracle::random_frame(n, 4, gen));
    CHECK(isotropic_curvature(identity_tensor(n), f) == doctest::Approx(4.0).epsilon(1e-13));
    const CurvTensor a = random_curvature(n, 1), b = random_curvature(n, 2);
    CHECK(isotropic_curvature(a, f) == doctest::Approx(oracle::iso(a, f.columns())).epsilon(1e-12));
    const double lin = isotropic_curvature(2.0 * a - 3.0 * b, f);
    CHECK(std::abs(lin - (2.0 * isotropic_curvature(a, f) - 3.0 * isotropic_curvature(b, f))) < 1e-12);
  }
  const Frame4 e(Matrix::Identity(4, 4));
  CHECK(isotropic_curvature(product_spheres({2, 2}, {1, 1}), e) == 0.0);
  Matrix skew = Matrix::Identity(5, 4);
  skew(4, 0) = 1e-6;
  CHECK_THROWS_AS(Frame4{skew}, CurvError);
}

TEST_CASE("rotation equivariance") {
  std::mt19937_64 gen(17);
  for (int n : {4, 5}) {
    const Matrix g = oracle::random_rotation(n, gen);
    const CurvTensor r = random_curvature(n, 21);
    const CurvTensor gr = rotate(r, g);
    CHECK(oracle::max_defect(gr) < 1e-13);
    CHECK((ricci(gr).matrix() - g * ricci(r).matrix() * g.transpose()).norm() < 1e-11);
    const Matrix f = oracle::random_frame(n, 4, gen);
    CHECK(std::abs(isotropic_curvature(gr, Frame4(g * f)) - isotropic_curvature(r, Frame4(f))) < 1e-11);
  }
}

TEST_CASE("symmetric matrix validation") {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(SymMatrix{m}, CurvError);
  try {
    SymMatrix{m};
  } catch (const CurvError& e) {
    CHECK(e.code() == ErrorCode::SymmetryViolation);
  }
}
