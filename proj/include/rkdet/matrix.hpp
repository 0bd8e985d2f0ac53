#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rkdet {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major, at least 1x1.
class Matrix {
 public:
  /// Zero matrix. Throws DimensionError when either dimension is 0.
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  /// Row-wise literal, e.g. Matrix{{1, 2}, {3, 4}}.
  Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> values);
  static Matrix diagonal(std::initializer_list<double> values);
  static Matrix column(std::span<const Complex> values);
  static Matrix column(std::initializer_list<Complex> values);
  /// k-th canonical basis vector of C^n (0-based k).
  static Matrix unit(std::size_t n, std::size_t k);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  /// Flat access for column vectors and row-major traversal.
  Complex& operator[](std::size_t k) { return entries_[k]; }
  const Complex& operator[](std::size_t k) const { return entries_[k]; }

  std::span<const Complex> entries() const noexcept { return entries_; }

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;
  void set_block(std::size_t row0, std::size_t col0, const Matrix& src);
  Matrix col(std::size_t j) const;
  std::vector<Complex> diagonal_entries() const;

  double frobenius_norm() const;
  double max_abs() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(Complex s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> entries_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(Complex s, Matrix m);
Matrix operator*(Matrix m, Complex s);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Ambient inner product <x, y> = y* x of two column vectors (linear in x).
Complex dot(const Matrix& x, const Matrix& y);

/// Euclidean norm of a column vector.
double vector_norm(const Matrix& x);

/// Entrywise (Hadamard/Schur) product of equally sized matrices.
Matrix hadamard(const Matrix& a, const Matrix& b);

/// Stacks column vectors side by side.
Matrix hstack(std::span<const Matrix> columns);

/// Symmetric partition (n_1, ..., n_s) of a square dimension into diagonal blocks.
/// Block indices are 1-based throughout the public API.
class BlockPartition {
 public:
  explicit BlockPartition(std::vector<std::size_t> sizes);

  /// Partition into n blocks of size 1.
  static BlockPartition scalar(std::size_t n);
  /// s blocks of size t.
  static BlockPartition uniform(std::size_t s, std::size_t t);

  std::size_t count() const noexcept { return sizes_.size(); }
  std::size_t size(std::size_t block) const;
  /// Row offset of block i (1-based), and offset(s+1) == dimension().
  std::size_t offset(std::size_t block) const;
  std::size_t dimension() const noexcept { return offsets_.back(); }
  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
  bool is_uniform() const noexcept;
  bool is_scalar() const noexcept;

  friend bool operator==(const BlockPartition&, const BlockPartition&) = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
};

/// Square matrix together with a symmetric block partition.
class BlockMatrix {
 public:
  BlockMatrix(Matrix data, BlockPartition partition);

  const Matrix& data() const noexcept { return data_; }
  const BlockPartition& partition() const noexcept { return partition_; }
  std::size_t block_count() const noexcept { return partition_.count(); }
  std::size_t dimension() const noexcept { return partition_.dimension(); }

  /// Block (i, j), both 1-based.
  Matrix block(std::size_t i, std::size_t j) const;

 private:
  Matrix data_;
  BlockPartition partition_;
};

}  // namespace rkdet
