#include "curvlab/tensor_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace curvlab {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) { throw CurvError(ErrorCode::ParseError, what); }

std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col) + " (offset " + std::to_string(byte) + ")";
}

}  // namespace

LoadedTensor parse_tensor(const std::string& text, bool force) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail("malformed tensor JSON at " + locate(text, e.byte) + ": " + e.what());
  }
  return parse_tensor_document(doc, force);
}

LoadedTensor parse_tensor_document(const json& doc, bool force) {
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("entries")) {
    parse_fail("tensor JSON needs \"dim\" and \"entries\"");
  }
  if (!doc["dim"].is_number_integer()) parse_fail("\"dim\" must be an integer");
  const int n = doc["dim"].get<int>();
  if (n < 2 || n > 64) parse_fail("\"dim\" out of range: " + std::to_string(n));
  if (!doc["entries"].is_array()) parse_fail("\"entries\" must be an array");

  Tensor4 t(n);
  Tensor4 assigned(n);  // 1 where set
  std::size_t idx = 0;
  for (const json& e : doc["entries"]) {
    const std::string where = "entry #" + std::to_string(idx++);
    if (!e.is_array() || e.size() != 5) parse_fail(where + ": expected [i, j, k, l, value]");
    int ix[4];
    for (int a = 0; a < 4; ++a) {
      if (!e[a].is_number_integer()) parse_fail(where + ": indices must be integers");
      ix[a] = e[a].get<int>();
      if (ix[a] < 0 || ix[a] >= n) parse_fail(where + ": index out of range");
    }
    if (!e[4].is_number()) parse_fail(where + ": value must be a number");
    const double v = e[4].get<double>();
    if (!std::isfinite(v)) parse_fail(where + ": value must be finite");
    const int i = ix[0], j = ix[1], k = ix[2], l = ix[3];
    if ((i == j || k == l) && v != 0.0) parse_fail(where + ": nonzero value on a repeated antisymmetric index");

    const struct {
      int a, b, c, d;
      double sign;
    } orbit[8] = {{i, j, k, l, 1}, {j, i, k, l, -1}, {i, j, l, k, -1}, {j, i, l, k, 1},
                  {k, l, i, j, 1}, {l, k, i, j, -1}, {k, l, j, i, -1}, {l, k, j, i, 1}};
    for (const auto& o : orbit) {
      const double sv = o.sign * v;
      if (assigned(o.a, o.b, o.c, o.d) != 0.0 && t(o.a, o.b, o.c, o.d) != sv) {
        parse_fail(where + ": conflicts with an earlier entry for the same symmetry orbit");
      }
      t(o.a, o.b, o.c, o.d) = sv;
      assigned(o.a, o.b, o.c, o.d) = 1.0;
    }
  }

  CurvTensor projected = project_bianchi(t);
  double diff = 0.0, total = 0.0;
  auto raw = t.data();
  auto out = projected.components().data();
  for (std::size_t q = 0; q < raw.size(); ++q) {
    diff += (raw[q] - out[q]) * (raw[q] - out[q]);
    total += raw[q] * raw[q];
  }
  const double residual = total > 0.0 ? std::sqrt(diff / total) : 0.0;
  if (residual > 1e-8 && !force) {
    throw CurvError(ErrorCode::ProjectionResidual,
                    "input violates the first Bianchi identity (relative residual " + std::to_string(residual) +
                        "); pass force to accept the projection");
  }
  return {std::move(projected), residual};
}

json tensor_to_json(const CurvTensor& r) {
  const int n = r.dim();
  json entries = json::array();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          if (pair_index(k, l, n) < pair_index(i, j, n)) continue;
          const double v = r(i, j, k, l);
          if (v != 0.0) entries.push_back(json::array({i, j, k, l, v}));
        }
  return json{{"dim", n}, {"entries", std::move(entries)}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CurvError(ErrorCode::UsageError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CurvError(ErrorCode::UsageError, "cannot write '" + tmp.string() + "'");
    out << contents;
    if (!out.flush()) throw CurvError(ErrorCode::UsageError, "write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace curvlab
