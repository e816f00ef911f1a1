#include <doctest.h>

#include "curvlab/hamilton.hpp"
#include "curvlab/models.hpp"
#include "curvlab/rigidity.hpp"
#include "oracles.hpp"

using namespace curvlab;

namespace {

ConeSpec cone(ConeKind k) {
  ConeSpec c;
  c.kind = k;
  return c;
}

}  // namespace

TEST_CASE("einstein normalization") {
  CHECK(norm(normalize_einstein(3.0 * identity_tensor(4)) - identity_tensor(4)) < 1e-14);
  const CurvTensor ps = normalize_einstein(product_spheres({2, 2}, {1, 1}));
  CHECK(norm(ps - product_spheres({2, 2}, {3, 3})) < 1e-14);
  CHECK(einstein_residual(ps) < 1e-14);
  CHECK_THROWS_AS(normalize_einstein(random_curvature(4, 1)), CurvError);
  CHECK_THROWS_AS(normalize_einstein(-1.0 * identity_tensor(4)), CurvError);
}

TEST_CASE("pinching tensor") {
  CHECK(norm(pinching_tensor(identity_tensor(4), 1.0)) == 0.0);
  const CurvTensor r = random_einstein(4, 5);
  CHECK(scalar(pinching_tensor(r, 0.5)) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK((oracle::ricci(pinching_tensor(r, 0.3)) - 3.0 * 0.7 * Matrix::Identity(4, 4)).norm() < 1e-11);
  CHECK(oracle::ricci(pinching_tensor(r, 1.0)).norm() < 1e-11);
}

TEST_CASE("kappa star") {
  CHECK(kappa_star(cone(ConeKind::NIC), identity_tensor(4)).kappa == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(kappa_star(cone(ConeKind::NonnegCurvOp), identity_tensor(4)).kappa == doctest::Approx(1.0).epsilon(1e-10));
  const KappaResult b = kappa_star(cone(ConeKind::NIC), product_spheres({2, 2}, {3, 3}));
  CHECK(b.boundary_input);
  CHECK(b.kappa == 0.0);
  CHECK_THROWS_AS(kappa_star(cone(ConeKind::NIC), 2.0 * identity_tensor(4)), CurvError);

  const CurvTensor r = random_einstein(4, 2);
  const KappaResult k = kappa_star(cone(ConeKind::NonnegCurvOp), r);
  Eigen::SelfAdjointEigenSolver<Matrix> es(curv_operator_matrix(r).matrix());
  if (es.eigenvalues()(0) > 0) {
    CHECK(k.kappa == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-9));
  }
}

TEST_CASE("quadratic identities") {
  CHECK(eq3_residual(identity_tensor(4), 0.5) < 1e-12);
  CHECK(eq3_residual(identity_tensor(4), 0.0) == 0.0);
  CHECK(prop1_residual_symmetric(identity_tensor(4), 0.5) < 1e-12);
  for (double k : {0.2, 0.6}) CHECK(prop1_residual_symmetric(product_spheres({2, 2}, {3, 3}), k) < 1e-10);
  CHECK(prop1_residual_symmetric(complex_space_form(2, 2.0), 0.3) < 1e-9);
  for (std::uint64_t s = 0; s < 5; ++s) CHECK(eq3_residual(random_einstein(5, s), 0.37) < 1e-10);
  CHECK_THROWS_AS(eq3_residual(2.0 * identity_tensor(4), 0.5), CurvError);
  CHECK_THROWS_AS(prop1_residual_symmetric(random_einstein(4, 1), 0.5), CurvError);

  // independent check of the right-hand side through the brute-force Q
  const CurvTensor r = random_einstein(4, 8);
  const double kappa = 0.4;
  const oracle::Dense4 qs = oracle::q_bruteforce(oracle::copy(pinching_tensor(r, kappa)));
  const oracle::Dense4 qr = oracle::q_bruteforce(oracle::copy(r));
  const oracle::Dense4 id = oracle::identity(4);
  double d = 0.0;
  for (std::size_t q = 0; q < qs.a.size(); ++q) {
    d = std::max(d, std::abs(qs.a[q] - qr.a[q] - 6.0 * kappa * (kappa - 2.0) * id.a[q]));
  }
  CHECK(d < 1e-12);
}

TEST_CASE("rigidity probe") {
  const RigidityReport c = rigidity_probe(cone(ConeKind::NIC), 2.0 * identity_tensor(4), "2I");
  CHECK(c.verdict == RigidityVerdict::ConstantCurvature);
  CHECK(c.kappa_star == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(c.scale_factor == doctest::Approx(0.5));

  const RigidityReport b = rigidity_probe(cone(ConeKind::NIC), product_spheres({2, 2}, {1, 1}));
  CHECK(b.verdict == RigidityVerdict::BoundaryModel);
  CHECK(b.kappa_star <= 1e-8);
  CHECK(b.fixed_point_residual <= 1e-10);
  CHECK(b.prop1_residual_symmetric.has_value());

  const RigidityReport e = rigidity_probe(cone(ConeKind::NIC), product_spheres({2, 2}, {3, 3}));
  CHECK(e.verdict == RigidityVerdict::BoundaryModel);

  const CurvTensor r = random_einstein(4, 1);
  const RigidityReport a = rigidity_probe(cone(ConeKind::NIC), r);
  const RigidityReport a5 = rigidity_probe(cone(ConeKind::NIC), 5.0 * r);
  CHECK(a.verdict == a5.verdict);
  CHECK(a.kappa_star == doctest::Approx(a5.kappa_star).epsilon(1e-8));
  CHECK(!a.prop1_residual_symmetric.has_value());
  CHECK(std::abs(a.at_kappa_star.margin) <= 10 * 1e-9);
  CHECK_THROWS_AS(rigidity_probe(cone(ConeKind::NIC), random_curvature(4, 3)), CurvError);
}
