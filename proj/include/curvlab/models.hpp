#pragma once

// Canonical and random curvature tensors used as test subjects.

#include <cstdint>
#include <string>
#include <vector>

#include "curvlab/tensor.hpp"

namespace curvlab {

struct ConeSpec;

enum class ModelKind { Constant, ComplexSpaceForm, ProductSpheres, Random, RandomEinstein };

struct ModelSpec {
  ModelKind kind = ModelKind::Constant;
  int dim = 4;
  double c = 1.0;
  std::vector<int> factor_dims;
  std::vector<double> curvatures;
  std::uint64_t seed = 0;
};

/// c * I in dimension n. Accepts n = 2 so that complex_space_form(1, c) has a comparison target.
CurvTensor constant_curvature(int n, double c);

/// Complex space form of complex dimension m (real dimension 2m) with
/// holomorphic sectional curvature c, standard complex structure J e_{2a} = e_{2a+1}.
CurvTensor complex_space_form(int m, double c);

/// Riemannian product of round spheres: constant curvature c_a on each block, mixed terms 0.
CurvTensor product_spheres(const std::vector<int>& dims, const std::vector<double>& curvatures);

/// Gaussian entries, symmetrized, Bianchi-projected, unit norm. Deterministic in seed.
CurvTensor random_curvature(int n, std::uint64_t seed);

/// weyl_part(random_curvature(n, seed)) + I; Ric = (n-1) delta.
CurvTensor random_einstein(int n, std::uint64_t seed);

/// Uniform point on the segment from I to the boundary of the cone along a random direction.
CurvTensor random_in_cone(const ConeSpec& cone, int n, std::uint64_t seed);

CurvTensor make_model(const ModelSpec& spec);

/// Parses "constant:4:1", "complex_space_form:2:2", "product_spheres:2,2:3,3",
/// "random:5", "random_einstein:4". Random kinds take their seed from `seed`.
ModelSpec parse_model_spec(const std::string& text, std::uint64_t seed);

std::string model_kind_name(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

}  // namespace curvlab
