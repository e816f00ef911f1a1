#pragma once

// Tensor interchange JSON: {"dim": n, "entries": [[i, j, k, l, value], ...]}, 0-based.
// One representative per symmetry orbit suffices; the loader fills the orbit,
// Bianchi-projects and reports the projection residual.

#include <string>

#include <json.hpp>

#include "curvlab/tensor.hpp"

namespace curvlab {

struct LoadedTensor {
  CurvTensor tensor;
  /// norm(T - b(T)) / norm(T) for the orbit-filled input T.
  double projection_residual = 0.0;
};

/// Throws ParseError (with line/column for malformed JSON, or for conflicting
/// duplicate entries) and ProjectionResidual when the residual exceeds 1e-8
/// unless `force` is set.
LoadedTensor parse_tensor(const std::string& text, bool force = false);
LoadedTensor parse_tensor_document(const nlohmann::json& doc, bool force = false);

/// Emits one entry per nonzero orbit representative (i < j, k < l, (i,j) <= (k,l)).
nlohmann::json tensor_to_json(const CurvTensor& r);

std::string read_text_file(const std::string& path);

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace curvlab
