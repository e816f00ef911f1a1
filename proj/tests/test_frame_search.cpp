#include <doctest.h>

#include "curvlab/frame_search.hpp"
#include "curvlab/models.hpp"
#include "oracles.hpp"

using namespace curvlab;

TEST_CASE("functional values match the defining formulas") {
  std::mt19937_64 gen(8);
  const CurvTensor r = random_curvature(6, 3);
  const BivectorFunctional iso(r, BivectorFunctional::Kind::Isotropic);
  const BivectorFunctional sec(r, BivectorFunctional::Kind::Sectional);
  for (int t = 0; t < 5; ++t) {
    const Matrix f = oracle::random_frame(6, 4, gen);
    CHECK(iso.value(f) == doctest::Approx(oracle::iso(r, f)).epsilon(1e-12));
    const Matrix p = oracle::random_frame(6, 2, gen);
    CHECK(sec.value(p) == doctest::Approx(oracle::eval4(r, p.col(0), p.col(1), p.col(0), p.col(1))).epsilon(1e-12));
  }
  CHECK(iso.scale() == doctest::Approx(norm(r)));
}

TEST_CASE("gradients match finite differences") {
  std::mt19937_64 gen(9);
  const CurvTensor r = random_curvature(5, 4);
  for (auto kind : {BivectorFunctional::Kind::Isotropic, BivectorFunctional::Kind::Sectional}) {
    const BivectorFunctional f(r, kind);
    // any matrix, not only frames: the gradient is of the polynomial extension
    std::normal_distribution<double> g;
    Matrix x(5, f.columns());
    for (int i = 0; i < x.size(); ++i) x.data()[i] = g(gen);
    Matrix grad;
    f.value_and_gradient(x, grad);
    const Matrix fd = oracle::fd_gradient([&](const Matrix& y) { return f.value(y); }, x);
    CHECK((grad - fd).norm() < 1e-6 * std::max(1.0, fd.norm()));
  }
}

TEST_CASE("stiefel helpers") {
  std::mt19937_64 gen(10);
  std::normal_distribution<double> g;
  Matrix a(6, 4);
  for (int i = 0; i < a.size(); ++i) a.data()[i] = g(gen);
  const Matrix q = orthonormalize(a);
  CHECK((q.transpose() * q - Matrix::Identity(4, 4)).norm() < 1e-14);
  Matrix e(6, 4);
  for (int i = 0; i < e.size(); ++i) e.data()[i] = g(gen);
  const Matrix xi = stiefel_project(q, e);
  const Matrix s = q.transpose() * xi;
  CHECK((s + s.transpose()).norm() < 1e-13);  // tangent vectors: Q^T xi skew
}

TEST_CASE("multistart minimum") {
  SearchOptions opts;
  const SearchResult id = min_isotropic(identity_tensor(5), opts);
  CHECK(id.value == doctest::Approx(4.0).epsilon(1e-12));
  const SearchResult ps = min_isotropic(product_spheres({2, 2}, {1, 1}), opts);
  CHECK(std::abs(ps.value) < 1e-9);
  const SearchResult cs = min_isotropic(complex_space_form(2, 2.0), opts);
  CHECK(std::abs(cs.value) < 1e-6);

  const CurvTensor r = random_curvature(4, 12);
  const SearchResult rr = min_isotropic(r, opts);
  CHECK(rr.value == doctest::Approx(oracle::iso(r, rr.frame)).epsilon(1e-12));
  CHECK(rr.value <= oracle::sampled_min_iso(r, 20000, 3) + 1e-12);
  CHECK((rr.frame.transpose() * rr.frame - Matrix::Identity(4, 4)).norm() < 1e-12);

  const SearchResult sec = min_sectional(product_spheres({2, 2}, {1, 1}), opts);
  CHECK(std::abs(sec.value) < 1e-9);
}

TEST_CASE("multistart is independent of scheduling") {
  const CurvTensor r = random_curvature(5, 31);
  SearchOptions a;
  a.seed = 4;
  a.restarts = 16;
  SearchOptions b = a;
  b.parallel = false;
  const SearchResult pa = min_isotropic(r, a);
  const SearchResult sb = min_isotropic(r, b);
  CHECK(pa.value == sb.value);
  CHECK(pa.frame == sb.frame);
  REQUIRE(pa.runs.size() == sb.runs.size());
  for (std::size_t k = 0; k < pa.runs.size(); ++k) CHECK(pa.runs[k].value == sb.runs[k].value);
}
