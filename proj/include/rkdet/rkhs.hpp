#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rkdet/linalg.hpp"
#include "rkdet/matrix.hpp"

namespace rkdet {

class RkhsSpace;

/// A vector of the ambient space known to lie in ran(kernel) of `space`.
/// Holds a non-owning pointer; must not outlive the space it came from.
struct RkhsElement {
  Matrix vector;
  const RkhsSpace* space;
};

/// Finite-dimensional RKHS H_A realised as the range of a Hermitian PSD
/// kernel A with <Ax, Ay>_{H_A} = <Ax, y>. Inner products go through the
/// cached Moore-Penrose inverse: <f, g>_{H_A} = g* A+ f.
class RkhsSpace {
 public:
  explicit RkhsSpace(Matrix kernel, double range_tol = tol::kRange);
  RkhsSpace(Matrix kernel, BlockPartition partition, double range_tol = tol::kRange);
  explicit RkhsSpace(const BlockMatrix& kernel, double range_tol = tol::kRange);

  const Matrix& kernel() const noexcept { return kernel_; }
  const Matrix& pinv() const noexcept { return pinv_; }
  const std::optional<BlockPartition>& partition() const noexcept { return partition_; }
  double range_tol() const noexcept { return range_tol_; }
  std::size_t dimension() const noexcept { return kernel_.rows(); }

  /// ||A A+ v - v|| <= range_tol * (1 + ||v||).
  bool contains(const Matrix& v) const;
  /// Wraps v as an element; throws OutOfRangeError when v is not in ran(A).
  RkhsElement element(const Matrix& v) const;

  /// <f, g>_{H_A} for ambient columns f, g in ran(A).
  Complex inner(const Matrix& f, const Matrix& g) const;
  double norm(const Matrix& v) const;

  /// The n x n_i block column of the kernel, i.e. A applied to the canonical
  /// injection of block i (1-based). Throws ConfigurationError without a partition.
  Matrix kernel_column(std::size_t block) const;

 private:
  void validate() const;
  void require_member(const Matrix& v, const char* what) const;

  Matrix kernel_;
  Matrix pinv_;
  std::optional<BlockPartition> partition_;
  double range_tol_;
};

Complex rkhs_inner(const RkhsSpace& space, const RkhsElement& f, const RkhsElement& g);
double rkhs_norm(const RkhsSpace& space, const Matrix& v);
Matrix kernel_column(const RkhsSpace& space, std::size_t block);

/// G[i][j] = <a_j, a_i>. All elements must share one space.
Matrix gram_matrix(std::span<const RkhsElement> vectors);

struct SumCheck {
  double lhs;  // ||f + g||^2 in H_{A+B}
  double rhs;  // ||f||^2_{H_A} + ||g||^2_{H_B}
  bool equality;
  std::optional<Matrix> witness;  // z with f = Az and g = Bz
};

/// Pythagorean inequality for the sum of two RKHSs with its equality test.
/// The witness is the least-squares solution of [A; B] z = [f; g], kept when
/// its residual is at most `tol` * (1 + ||[f; g]||).
SumCheck rkhs_sum_check(const Matrix& a, const Matrix& b, const Matrix& f, const Matrix& g,
                        double tol = tol::kRange);

}  // namespace rkdet
