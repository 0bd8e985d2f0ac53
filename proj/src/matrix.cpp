#include "rkdet/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rkdet/errors.hpp"

namespace rkdet {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("matrix dimensions must be positive");
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("matrix dimensions must be positive");
  }
  if (entries_.size() != rows * cols) {
    throw DimensionError("entry count " + std::to_string(entries_.size()) +
                         " does not match " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  if (rows_ == 0 || cols_ == 0) {
    throw DimensionError("matrix dimensions must be positive");
  }
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw DimensionError("ragged matrix literal");
    }
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
  Matrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

Matrix Matrix::column(std::span<const Complex> values) {
  return Matrix(values.size(), 1, std::vector<Complex>(values.begin(), values.end()));
}

Matrix Matrix::column(std::initializer_list<Complex> values) {
  return column(std::span<const Complex>(values.begin(), values.size()));
}

Matrix Matrix::unit(std::size_t n, std::size_t k) {
  if (k >= n) throw IndexError("unit vector index out of range");
  Matrix e(n, 1);
  e[k] = 1.0;
  return e;
}

Matrix Matrix::adjoint() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Matrix Matrix::block(std::size_t row0, std::size_t col0, std::size_t nrows,
                     std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_) {
    throw IndexError("block exceeds matrix bounds");
  }
  Matrix out(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) out(i, j) = (*this)(row0 + i, col0 + j);
  return out;
}

void Matrix::set_block(std::size_t row0, std::size_t col0, const Matrix& src) {
  if (row0 + src.rows() > rows_ || col0 + src.cols() > cols_) {
    throw IndexError("block exceeds matrix bounds");
  }
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j) (*this)(row0 + i, col0 + j) = src(i, j);
}

Matrix Matrix::col(std::size_t j) const { return block(0, j, rows_, 1); }

std::vector<Complex> Matrix::diagonal_entries() const {
  std::vector<Complex> d(std::min(rows_, cols_));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
  return d;
}

double Matrix::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& z : entries_) sum += std::norm(z);
  return std::sqrt(sum);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  require_same_shape(*this, rhs, "operator+");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += rhs.entries_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  require_same_shape(*this, rhs, "operator-");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= rhs.entries_[k];
  return *this;
}

Matrix& Matrix::operator*=(Complex s) {
  for (auto& z : entries_) z *= s;
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    throw DimensionError("matrix product: inner dimensions " + std::to_string(lhs.cols()) +
                         " and " + std::to_string(rhs.rows()) + " differ");
  }
  Matrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

Matrix operator*(Complex s, Matrix m) { return m *= s; }
Matrix operator*(Matrix m, Complex s) { return m *= s; }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k)
    m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  return m;
}

Complex dot(const Matrix& x, const Matrix& y) {
  if (x.cols() != 1 || y.cols() != 1 || x.rows() != y.rows()) {
    throw DimensionError("dot: expects two columns of equal length");
  }
  Complex sum{};
  for (std::size_t k = 0; k < x.rows(); ++k) sum += x[k] * std::conj(y[k]);
  return sum;
}

double vector_norm(const Matrix& x) { return x.frobenius_norm(); }

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.entries().size(); ++k) out[k] = a[k] * b[k];
  return out;
}

Matrix hstack(std::span<const Matrix> columns) {
  if (columns.empty()) throw DimensionError("hstack: no columns");
  const std::size_t n = columns.front().rows();
  std::size_t total = 0;
  for (const auto& c : columns) {
    if (c.rows() != n) throw DimensionError("hstack: row counts differ");
    total += c.cols();
  }
  Matrix out(n, total);
  std::size_t at = 0;
  for (const auto& c : columns) {
    out.set_block(0, at, c);
    at += c.cols();
  }
  return out;
}

BlockPartition::BlockPartition(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw DimensionError("block partition needs at least one block");
  offsets_.reserve(sizes_.size() + 1);
  offsets_.push_back(0);
  for (auto n : sizes_) {
    if (n == 0) throw DimensionError("block sizes must be positive");
    offsets_.push_back(offsets_.back() + n);
  }
}

BlockPartition BlockPartition::scalar(std::size_t n) {
  return BlockPartition(std::vector<std::size_t>(n, 1));
}

BlockPartition BlockPartition::uniform(std::size_t s, std::size_t t) {
  return BlockPartition(std::vector<std::size_t>(s, t));
}

std::size_t BlockPartition::size(std::size_t block) const {
  if (block < 1 || block > sizes_.size()) {
    throw IndexError("block index " + std::to_string(block) + " outside 1.." +
                     std::to_string(sizes_.size()));
  }
  return sizes_[block - 1];
}

std::size_t BlockPartition::offset(std::size_t block) const {
  if (block < 1 || block > sizes_.size() + 1) {
    throw IndexError("block index " + std::to_string(block) + " outside 1.." +
                     std::to_string(sizes_.size()));
  }
  return offsets_[block - 1];
}

bool BlockPartition::is_uniform() const noexcept {
  return std::all_of(sizes_.begin(), sizes_.end(),
                     [&](std::size_t n) { return n == sizes_.front(); });
}

bool BlockPartition::is_scalar() const noexcept {
  return std::all_of(sizes_.begin(), sizes_.end(), [](std::size_t n) { return n == 1; });
}

BlockMatrix::BlockMatrix(Matrix data, BlockPartition partition)
    : data_(std::move(data)), partition_(std::move(partition)) {
  if (!data_.is_square() || data_.rows() != partition_.dimension()) {
    throw DimensionError("block matrix: partition dimension " +
                         std::to_string(partition_.dimension()) + " does not match " +
                         std::to_string(data_.rows()) + "x" + std::to_string(data_.cols()));
  }
}

Matrix BlockMatrix::block(std::size_t i, std::size_t j) const {
  return data_.block(partition_.offset(i), partition_.offset(j), partition_.size(i),
                     partition_.size(j));
}

}  // namespace rkdet
