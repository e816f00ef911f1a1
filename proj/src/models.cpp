#include "curvlab/models.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "curvlab/cones.hpp"
#include "curvlab/rng.hpp"

namespace curvlab {

CurvTensor constant_curvature(int n, double c) {
  if (n < 2) throw CurvError(ErrorCode::InvalidDimension, "constant curvature requires n >= 2");
  Tensor4 t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      t(i, j, i, j) = c;
      t(i, j, j, i) = -c;
    }
  return CurvTensor::assume_valid(std::move(t));
}

CurvTensor complex_space_form(int m, double c) {
  if (m < 1) throw CurvError(ErrorCode::InvalidDimension, "complex space form requires m >= 1");
  const int n = 2 * m;
  Matrix j = Matrix::Zero(n, n);
  for (int a = 0; a < m; ++a) {
    j(2 * a + 1, 2 * a) = 1.0;
    j(2 * a, 2 * a + 1) = -1.0;
  }
  auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  Tensor4 t(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          t(i, k, p, q) = 0.25 * c *
                          (d(i, p) * d(k, q) - d(i, q) * d(k, p) + j(i, p) * j(k, q) - j(i, q) * j(k, p) +
                           2.0 * j(i, k) * j(p, q));
        }
  return CurvTensor::assume_valid(std::move(t));
}

CurvTensor product_spheres(const std::vector<int>& dims, const std::vector<double>& curvatures) {
  if (dims.size() != curvatures.size() || dims.empty()) {
    throw CurvError(ErrorCode::DimMismatch, "product_spheres needs one curvature per factor");
  }
  for (std::size_t a = 0; a < dims.size(); ++a) {
    if (dims[a] < 2) throw CurvError(ErrorCode::InvalidDimension, "sphere factors need dimension >= 2");
    if (!(curvatures[a] > 0.0)) throw CurvError(ErrorCode::InvalidDimension, "sphere curvatures must be positive");
  }
  const int n = std::accumulate(dims.begin(), dims.end(), 0);
  Tensor4 t(n);
  int start = 0;
  for (std::size_t a = 0; a < dims.size(); ++a) {
    const int end = start + dims[a];
    for (int i = start; i < end; ++i)
      for (int j = start; j < end; ++j) {
        if (i == j) continue;
        t(i, j, i, j) = curvatures[a];
        t(i, j, j, i) = -curvatures[a];
      }
    start = end;
  }
  return CurvTensor::assume_valid(std::move(t));
}

CurvTensor random_curvature(int n, std::uint64_t seed) {
  if (n < 3) throw CurvError(ErrorCode::InvalidDimension, "random_curvature requires n >= 3");
  Rng rng = Rng::stream(seed, {stream_tag::kRandomCurvature, static_cast<std::uint64_t>(n)});
  Tensor4 raw(n);
  for (double& v : raw.data()) v = rng.normal();
  CurvTensor r = project_bianchi(symmetrize_pairs(raw));
  const double nr = norm(r);
  return (1.0 / nr) * std::move(r);
}

CurvTensor random_einstein(int n, std::uint64_t seed) {
  if (n < 4) throw CurvError(ErrorCode::InvalidDimension, "random_einstein requires n >= 4");
  return ricci_decomposition(random_curvature(n, seed)).weyl_part + identity_tensor(n);
}

CurvTensor random_in_cone(const ConeSpec& cone, int n, std::uint64_t seed) {
  if (n < 4) throw CurvError(ErrorCode::InvalidDimension, "random_in_cone requires n >= 4");
  ConeSpec spec = cone;
  spec.dim = n;
  const CurvTensor id = identity_tensor(n);
  constexpr int kMaxDirections = 64;
  for (int attempt = 0; attempt < kMaxDirections; ++attempt) {
    Rng rng = Rng::stream(seed, {stream_tag::kRandomInCone, static_cast<std::uint64_t>(attempt)});
    const std::uint64_t dir_seed =
        Rng::derive_seed(seed, {stream_tag::kRandomInCone, static_cast<std::uint64_t>(attempt), 1});
    const CurvTensor dir = random_curvature(n, dir_seed);
    try {
      const BoundaryPoint exit = project_to_boundary(spec, id, dir);
      double s = rng.uniform();
      while (s <= 0.0) s = rng.uniform();
      return id + (s * exit.t) * dir;
    } catch (const CurvError& e) {
      if (e.code() != ErrorCode::RayStaysInside) throw;
    }
  }
  throw CurvError(ErrorCode::BudgetExhausted, "no exit direction found for random_in_cone");
}

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Constant: return "constant";
    case ModelKind::ComplexSpaceForm: return "complex_space_form";
    case ModelKind::ProductSpheres: return "product_spheres";
    case ModelKind::Random: return "random";
    case ModelKind::RandomEinstein: return "random_einstein";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
  for (ModelKind k : {ModelKind::Constant, ModelKind::ComplexSpaceForm, ModelKind::ProductSpheres,
                      ModelKind::Random, ModelKind::RandomEinstein}) {
    if (model_kind_name(k) == name) return k;
  }
  throw CurvError(ErrorCode::UsageError, "unknown model kind '" + name + "'");
}

CurvTensor make_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::Constant:
      if (spec.dim < 3) throw CurvError(ErrorCode::InvalidDimension, "constant model requires n >= 3");
      return constant_curvature(spec.dim, spec.c);
    case ModelKind::ComplexSpaceForm:
      if (spec.dim % 2 != 0) throw CurvError(ErrorCode::InvalidDimension, "complex_space_form requires even n");
      return complex_space_form(spec.dim / 2, spec.c);
    case ModelKind::ProductSpheres: {
      const int total = std::accumulate(spec.factor_dims.begin(), spec.factor_dims.end(), 0);
      if (total != spec.dim) throw CurvError(ErrorCode::DimMismatch, "factor dims must sum to dim");
      return product_spheres(spec.factor_dims, spec.curvatures);
    }
    case ModelKind::Random: return random_curvature(spec.dim, spec.seed);
    case ModelKind::RandomEinstein: return random_einstein(spec.dim, spec.seed);
  }
  throw CurvError(ErrorCode::UsageError, "unhandled model kind");
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

template <typename T>
T parse_number(const std::string& s) {
  try {
    std::size_t used = 0;
    T v{};
    if constexpr (std::is_same_v<T, int>) v = std::stoi(s, &used);
    else v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CurvError(ErrorCode::UsageError, "bad number '" + s + "' in model spec");
  }
}

}  // namespace

ModelSpec parse_model_spec(const std::string& text, std::uint64_t seed) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw CurvError(ErrorCode::UsageError, "empty model spec");
  ModelSpec spec;
  spec.kind = parse_model_kind(parts[0]);
  spec.seed = seed;
  auto need = [&](std::size_t count) {
    if (parts.size() != count) {
      throw CurvError(ErrorCode::UsageError, "model spec '" + text + "' expects " + std::to_string(count - 1) + " fields");
    }
  };
  switch (spec.kind) {
    case ModelKind::Constant:
      need(3);
      spec.dim = parse_number<int>(parts[1]);
      spec.c = parse_number<double>(parts[2]);
      break;
    case ModelKind::ComplexSpaceForm:
      need(3);
      spec.dim = 2 * parse_number<int>(parts[1]);
      spec.c = parse_number<double>(parts[2]);
      break;
    case ModelKind::ProductSpheres:
      need(3);
      for (const auto& d : split(parts[1], ',')) spec.factor_dims.push_back(parse_number<int>(d));
      for (const auto& c : split(parts[2], ',')) spec.curvatures.push_back(parse_number<double>(c));
      spec.dim = std::accumulate(spec.factor_dims.begin(), spec.factor_dims.end(), 0);
      break;
    case ModelKind::Random:
    case ModelKind::RandomEinstein:
      need(2);
      spec.dim = parse_number<int>(parts[1]);
      break;
  }
  return spec;
}

}  // namespace curvlab
