#include <doctest.h>

#include "curvlab/hamilton.hpp"
#include "curvlab/kernels.hpp"
#include "curvlab/models.hpp"
#include "oracles.hpp"

using namespace curvlab;

namespace {

double rel(const CurvTensor& a, const oracle::Dense4& b) { return oracle::dist(oracle::copy(a), b) / oracle::norm(b); }

}  // namespace

TEST_CASE("q term of the identity against brute force") {
  for (int n = 3; n <= 7; ++n) {
    const oracle::Dense4 expect = oracle::scaled(oracle::identity(n), 2.0 * (n - 1));
    CHECK(oracle::dist(oracle::q_bruteforce(oracle::identity(n)), expect) == 0.0);
    CHECK(rel(q_term(identity_tensor(n)), expect) <= 1e-12);
    CHECK(rel(q_term_reference(identity_tensor(n)), expect) <= 1e-12);
  }
  CHECK(q_term(identity_tensor(4))(0, 1, 0, 1) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("q term on models") {
  const CurvTensor ps = product_spheres({2, 2}, {3, 3});
  const CurvTensor q = q_term(ps);
  CHECK(q(0, 1, 0, 1) == doctest::Approx(18.0).epsilon(1e-14));
  CHECK(norm(q - 6.0 * ps) < 1e-12);
  const CurvTensor c = 1.7 * identity_tensor(5);
  CHECK(norm(q_term(c) - (1.7 * 1.7 * 8.0) * identity_tensor(5)) < 1e-12);
  CHECK(norm(q_term(CurvTensor::zero(4))) == 0.0);
}

TEST_CASE("q kernels agree with the six-index oracle") {
  for (int n : {4, 5, 6}) {
    const CurvTensor r = random_curvature(n, 100 + n);
    const oracle::Dense4 expect = oracle::q_bruteforce(oracle::copy(r));
    const Tensor4 par = kernels::q_raw_parallel(r);
    const Tensor4 ser = kernels::q_raw_reference(r);
    double dp = 0.0, ds = 0.0;
    for (std::size_t k = 0; k < expect.a.size(); ++k) {
      dp = std::max(dp, std::abs(par.data()[k] - expect.a[k]));
      ds = std::max(ds, std::abs(ser.data()[k] - expect.a[k]));
    }
    CHECK(dp < 1e-13);
    CHECK(ds < 1e-13);
    const QResult checked = q_term_checked(r);
    CHECK(checked.bianchi_residual <= 1e-12);
    CHECK(oracle::max_defect(checked.tensor) < 1e-13 * norm(checked.tensor));
  }
}

TEST_CASE("q term properties") {
  std::mt19937_64 gen(77);
  for (int n : {4, 5}) {
    const CurvTensor r = random_curvature(n, 5);
    const double c = -2.3;
    CHECK(norm(q_term(c * r) - (c * c) * q_term(r)) <= 1e-11 * norm(q_term(c * r)));
    const Matrix g = oracle::random_rotation(n, gen);
    const CurvTensor lhs = q_term(rotate(r, g));
    const CurvTensor rhs = rotate(q_term(r), g);
    CHECK(norm(lhs - rhs) <= 1e-10 * norm(rhs));
  }
  for (int n = 4; n <= 8; ++n) {
    CHECK(scalar(q_term(identity_tensor(n))) == doctest::Approx(2.0 * (n - 1) * n * (n - 1)).epsilon(1e-14));
  }
}

TEST_CASE("flow from the identity follows the closed form") {
  FlowOptions opts;
  opts.method = FlowMethod::Rk4Fixed;
  opts.step = 1e-4;
  opts.t_end = 0.1;
  opts.sample_every = 100;
  const TrajectoryRecord fixed = integrate(identity_tensor(4), opts);
  CHECK(fixed.status == FlowStatus::Completed);
  CHECK(fixed.times.back() == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(norm(fixed.tensors.back() - 2.5 * identity_tensor(4)) / norm(2.5 * identity_tensor(4)) < 1e-10);
  for (std::size_t k = 1; k < fixed.times.size(); ++k) CHECK(fixed.times[k] > fixed.times[k - 1]);
  CHECK(fixed.times.size() == fixed.tensors.size());

  opts.method = FlowMethod::Rk4Adaptive;
  opts.step = 1e-3;
  const TrajectoryRecord ad = integrate(identity_tensor(4), opts);
  CHECK(norm(ad.tensors.back() - 2.5 * identity_tensor(4)) / norm(2.5 * identity_tensor(4)) < 1e-9);
}

TEST_CASE("rk4 order") {
  auto err = [](double h) {
    FlowOptions o;
    o.method = FlowMethod::Rk4Fixed;
    o.step = h;
    o.t_end = 0.1;
    o.sample_every = 1000000;
    const TrajectoryRecord tr = integrate(identity_tensor(4), o);
    return std::abs(tr.tensors.back()(0, 1, 0, 1) - 2.5);
  };
  const double ratio = err(0.01) / err(0.005);
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("flow edge cases") {
  FlowOptions opts;
  opts.t_end = 0.5;
  const TrajectoryRecord zero = integrate(CurvTensor::zero(4), opts);
  CHECK(norm(zero.tensors.back()) == 0.0);

  opts.normalized = true;
  const TrajectoryRecord still = integrate(identity_tensor(4), opts);
  for (const CurvTensor& t : still.tensors) CHECK(norm(t - identity_tensor(4)) < 1e-12);
  CHECK_THROWS_AS(integrate(-1.0 * identity_tensor(4), opts), CurvError);

  opts.normalized = false;
  opts.t_end = 1.0;  // blowup at t = 1/6
  const TrajectoryRecord blow = integrate(identity_tensor(4), opts);
  CHECK(blow.status == FlowStatus::BlowupDetected);
  CHECK(blow.times.back() < 1.0 / 6.0 + 1e-9);
  CHECK(!blow.diagnostics.empty());
}

TEST_CASE("fixed point residual") {
  CHECK(fixed_point_residual(identity_tensor(4)) < 1e-12);
  CHECK(fixed_point_residual(product_spheres({2, 2}, {3, 3})) < 1e-12);
  CHECK(fixed_point_residual(complex_space_form(2, 2.0)) < 1e-10);
  CHECK(fixed_point_residual(random_einstein(4, 1)) > 1e-3);
  CHECK(parse_flow_method("rk4_fixed") == FlowMethod::Rk4Fixed);
  CHECK(flow_method_name(FlowMethod::Rk4Adaptive) == "rk4_adaptive");
  CHECK_THROWS_AS(parse_flow_method("euler"), CurvError);
}
