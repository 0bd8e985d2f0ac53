#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rkdet/linalg.hpp"
#include "rkdet/matrix.hpp"

namespace rkdet {

/// Block matrices A^1..A^m, each Hermitian PSD, all with the same number s
/// of diagonal blocks. Block sizes n_ip may differ between factors.
class BlockFamily {
 public:
  explicit BlockFamily(std::vector<BlockMatrix> factors);

  std::size_t size() const noexcept { return factors_.size(); }
  std::size_t block_count() const noexcept { return factors_.front().block_count(); }
  const BlockMatrix& operator[](std::size_t p) const { return factors_.at(p); }
  const std::vector<BlockMatrix>& factors() const noexcept { return factors_; }

  bool all_positive_definite() const;

 private:
  std::vector<BlockMatrix> factors_;
};

/// gamma = (i, j_1, ..., j_m), 1-based: shared block i, per-factor positions j_p.
struct TensorIndex {
  std::size_t block;
  std::vector<std::size_t> positions;
};

/// Blockwise Kronecker product: block (i, j) = A^1_ij (x) ... (x) A^m_ij,
/// partitioned by prod_p n_ip. For scalar partitions this is the entrywise product.
BlockMatrix khatri_rao(const BlockFamily& family);

/// Full Kronecker product A^1 (x) ... (x) A^m, the kernel of the tensor-product RKHS.
Matrix tensor_kernel(const BlockFamily& family);

/// f_1 (x) ... (x) f_m as a column of the tensor ambient space.
Matrix simple_tensor(std::span<const Matrix> factors);

/// Pullback of a tensor-space column along the diagonal map j -> (j, ..., j):
/// keeps the coordinates whose factor indices all lie in a common block.
Matrix diagonal_restriction(const BlockFamily& family, const Matrix& tensor);

/// Hadamard product f_1 * ... * f_m: block i is f_1(i) (x) ... (x) f_m(i).
Matrix diagonal_pullback(const BlockFamily& family, std::span<const Matrix> factors);

struct RestrictionCheck {
  double tensor_norm;
  double pullback_norm;
  bool holds;     // pullback_norm <= tensor_norm within tolerance
  bool extremal;  // equality within tolerance
};

/// Compares ||phi* f|| in the Hadamard-product RKHS with ||f|| in the tensor RKHS.
RestrictionCheck restriction_inequality_check(const BlockFamily& family, const Matrix& tensor,
                                              double tol = 1e-8);

struct ExtremalCheck {
  bool extremal;
  std::optional<std::size_t> witness_block;  // 1-based
};

/// Structural extremality test for simple tensors of PD kernels: some block i
/// has every f_p in ran k_i^p. Range membership is a projector residual test.
ExtremalCheck extremal_simple_tensor_check(const BlockFamily& family,
                                           std::span<const Matrix> factors,
                                           double tol = tol::kRange);

/// Per-factor, per-block eigenbases: bases[p][i-1] diagonalises A^p_ii.
using FamilyBases = std::vector<std::vector<Matrix>>;

FamilyBases family_eigenbases(const BlockFamily& family);

struct MainBoundResult {
  double lambda;       // minimum norm of the order-gamma IPIP for the Khatri-Rao kernel
  double upper_bound;  // prod_p lambda_p * {prod alpha_p - prod (alpha_p - 1)}^{-1/2}
  bool holds;
  bool equality;
  std::vector<double> factor_lambdas;  // lambda_{ij_p}^{A^p}
  std::vector<double> factor_alphas;   // lambda_{ij_p}^2 <A^p_ii c, c>
  Matrix candidate;                    // normalised h, always an IPIP solution
  double candidate_norm;
  double candidate_residual;           // max constraint violation of the candidate
  std::optional<Matrix> minimizer;     // the candidate, when equality holds
};

/// Upper bound on the Hadamard-product IPIP minimum norm in terms of the
/// factors' minimum norms, with the explicit minimiser in the equality case.
MainBoundResult theorem_main_min_norm(const BlockFamily& family, const FamilyBases& bases,
                                      const TensorIndex& gamma, double tol = 1e-7);

/// Eigenbases of the Khatri-Rao diagonal blocks induced by the factor bases,
/// ordered lexicographically in (j_1, ..., j_m).
std::vector<Matrix> khatri_rao_bases(const BlockFamily& family, const FamilyBases& bases);

}  // namespace rkdet
