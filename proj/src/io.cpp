#include "rkdet/io.hpp"

#include <fstream>
#include <sstream>

#include "rkdet/errors.hpp"

namespace rkdet::io {

namespace {

Complex entry_from_json(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw FormatError("matrix entry must be a number or a [re, im] pair");
}

Json entry_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

std::size_t positive_size(const Json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("matrix object is missing \"") + key + "\"");
  const Json& v = j.at(key);
  if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
    throw FormatError(std::string("\"") + key + "\" must be a positive integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

BlockMatrix MatrixFile::as_block() const {
  return BlockMatrix(matrix, partition.value_or(BlockPartition::scalar(matrix.rows())));
}

Json matrix_to_json(const Matrix& m, const std::optional<BlockPartition>& partition) {
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  if (partition) out["partition"] = partition->sizes();
  Json entries = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(entry_to_json(m(r, c)));
    entries.push_back(std::move(row));
  }
  out["entries"] = std::move(entries);
  return out;
}

Json matrix_to_json(const BlockMatrix& m) { return matrix_to_json(m.data(), m.partition()); }

MatrixFile matrix_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("matrix must be a JSON object");
  const std::size_t rows = positive_size(j, "rows");
  const std::size_t cols = positive_size(j, "cols");
  if (!j.contains("entries") || !j.at("entries").is_array() || j.at("entries").size() != rows) {
    throw FormatError("\"entries\" must be an array of " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Json& row = j.at("entries")[r];
    if (!row.is_array() || row.size() != cols) {
      throw FormatError("row " + std::to_string(r) + " must have " + std::to_string(cols) +
                        " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = entry_from_json(row[c]);
  }

  MatrixFile out{std::move(m), std::nullopt};
  if (j.contains("partition")) {
    const Json& p = j.at("partition");
    if (!p.is_array() || p.empty()) throw FormatError("\"partition\" must be a non-empty array");
    std::vector<std::size_t> sizes;
    for (const auto& v : p) {
      if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
        throw FormatError("partition sizes must be positive integers");
      }
      sizes.push_back(v.get<std::size_t>());
    }
    BlockPartition part(std::move(sizes));
    if (part.dimension() != rows || rows != cols) {
      throw FormatError("partition does not match the matrix dimension");
    }
    out.partition = std::move(part);
  }
  return out;
}

Json family_to_json(const BlockFamily& family) {
  Json factors = Json::array();
  for (const auto& a : family.factors()) factors.push_back(matrix_to_json(a));
  Json out;
  out["factors"] = std::move(factors);
  return out;
}

BlockFamily family_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("factors") || !j.at("factors").is_array() ||
      j.at("factors").empty()) {
    throw FormatError("family must be an object with a non-empty \"factors\" array");
  }
  std::vector<BlockMatrix> factors;
  for (const auto& f : j.at("factors")) factors.push_back(matrix_from_json(f).as_block());
  return BlockFamily(std::move(factors));
}

Json report_to_json(const InequalityReport& report) {
  Json out;
  out["name"] = report.name;
  out["lhs"] = report.lhs;
  out["rhs"] = report.rhs;
  out["margin"] = report.margin;
  out["holds"] = report.holds;
  out["equality"] = report.equality;
  out["equality_case"] = report.equality_case ? Json(*report.equality_case) : Json(nullptr);
  out["tol_used"] = report.tol_used;
  out["scale"] = report.scale;
  return out;
}

Matrix column_from_json(const Json& j) {
  if (j.is_object()) {
    Matrix m = matrix_from_json(j).matrix;
    if (m.cols() != 1) throw FormatError("expected a column vector");
    return m;
  }
  if (!j.is_array() || j.empty()) throw FormatError("vector must be a non-empty array");
  Matrix m(j.size(), 1);
  for (std::size_t k = 0; k < j.size(); ++k) m[k] = entry_from_json(j[k]);
  return m;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << dump(j) << '\n';
}

std::string dump(const Json& j) { return j.dump(2); }

}  // namespace rkdet::io
