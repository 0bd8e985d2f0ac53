#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "rkdet/hadamard.hpp"
#include "rkdet/inequalities.hpp"
#include "rkdet/matrix.hpp"

namespace rkdet::io {

using Json = nlohmann::ordered_json;

/// Matrix file: {"rows", "cols", "partition" (optional), "entries": [[[re, im], ...], ...]}.
struct MatrixFile {
  Matrix matrix;
  std::optional<BlockPartition> partition;

  BlockMatrix as_block() const;  // scalar partition when none is given
};

Json matrix_to_json(const Matrix& m, const std::optional<BlockPartition>& partition = {});
Json matrix_to_json(const BlockMatrix& m);
MatrixFile matrix_from_json(const Json& j);

/// Family file: {"factors": [matrix-object, ...]}.
Json family_to_json(const BlockFamily& family);
BlockFamily family_from_json(const Json& j);

Json report_to_json(const InequalityReport& report);

/// Column vector given either as a matrix object or a bare [[re, im], ...] list.
Matrix column_from_json(const Json& j);

/// Parse errors and unreadable files surface as FormatError.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

/// Two-space indented dump; doubles use the shortest round-trip form.
std::string dump(const Json& j);

}  // namespace rkdet::io
