#pragma once

// JSON matrix format: {"rows": n, "cols": m, "entries": [[re, im], ...]},
// entries in row-major order.

#include <string>

#include "json.hpp"

#include "ergoloc/qmat.hpp"

namespace ergoloc {

nlohmann::json matrix_to_json(const ComplexMatrix& m);

/// Throws InvalidInput on any structural problem (missing keys, wrong entry
/// count, non-numeric entries).
ComplexMatrix matrix_from_json(const nlohmann::json& j);

ComplexMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const ComplexMatrix& m);

/// Parses a whole file as JSON; InvalidInput on I/O or syntax errors.
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace ergoloc
