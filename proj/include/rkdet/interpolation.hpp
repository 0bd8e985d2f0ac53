#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rkdet/linalg.hpp"
#include "rkdet/matrix.hpp"

namespace rkdet {

/// Inner-product interpolation problem <f, a_i> = b_i, i = 1..n, posed
/// through the Gram matrix G[i][j] = <a_j, a_i> of the family.
struct IpipProblem {
  Matrix gram;
  Matrix data;                       // column b
  std::optional<std::size_t> order;  // set for canonical data e_order

  /// Family truncated at `order` (1-based) with data b = (0, ..., 0, 1).
  static IpipProblem canonical(const Matrix& gram, std::size_t order);
};

/// Minimum-norm solution f = sum_k c_k a_k.
struct IpipSolution {
  std::optional<Matrix> coefficients;  // empty when infeasible
  double norm = 0.0;
  bool feasible = false;
};

/// c = G+ b. Infeasible (b not in ran G) is reported, not thrown.
IpipSolution solve_ipip(const IpipProblem& problem, double tol = tol::kRange);

/// ||f||^2 = -det([[0, b*], [b, G]]) / det(G). Requires G positive definite.
double min_norm_bordered(const Matrix& gram, const Matrix& data);

/// lambda_k = sqrt(det G_{k-1} / det G_k) over leading principal minors, G_0 = 1.
std::vector<double> lambda_sequence(const Matrix& gram);

/// lambda_k as the norm of the order-k canonical IPIP, solved directly.
std::vector<double> ipip_lambdas(const Matrix& gram);

struct LambdaDetCheck {
  double product;       // prod_i lambda_i
  double inv_sqrt_det;  // det(T)^{-1/2}
  bool agree;
};

/// Minimum norms of the IPIPs over the kernel columns of H_T against det(T)^{-1/2}.
LambdaDetCheck lambda_det_identity_check(const Matrix& t, double tol = 1e-8);

/// Orthonormal eigenvectors (ascending eigenvalues) of each diagonal block.
std::vector<Matrix> block_eigenbases(const BlockMatrix& a);

struct BlockLambdaProduct {
  std::vector<double> lambdas;  // lambda_{ij}, j = 1..n_i
  double lambda_product;        // prod_j lambda_{ij}
  double minor_ratio;           // (det (T)_{i-1} / det (T)_i)^{1/2}
};

/// Per-block products of the block-ordered IPIP minimum norms over the family
/// {T u_ij} with u_ij the columns of `bases[i-1]` injected into block i.
std::vector<BlockLambdaProduct> block_lambda_products(const BlockMatrix& t,
                                                      std::span<const Matrix> bases);

struct BlockIpipResult {
  IpipSolution solution;
  Matrix function;            // f_ij as an ambient vector, in ran(A)
  double lambda;              // ||f_ij||
  double lower_bound;         // 1 / <A_ii u_ij, u_ij>^{1/2}
  double diagonal_value;      // <A_ii u_ij, u_ij>
  double predecessor_coupling;  // max |<A u_ij, u_i'j'>| over i'j' < ij
  bool equality;
  bool leading_components_vanish;  // blocks 1..i-1 of A u_ij are zero
};

/// Order-(i, j) IPIP in H_A with respect to the lexicographically ordered
/// CONS given by the per-block bases, and its lower bound.
BlockIpipResult block_ipip_min_norm(const BlockMatrix& a, std::span<const Matrix> bases,
                                    std::size_t i, std::size_t j,
                                    double tol = tol::kDefault);

/// Modified Gram-Schmidt. Throws RankError when a vector's residual falls
/// below tol times its norm.
std::vector<Matrix> gram_schmidt(std::span<const Matrix> vectors, double tol = tol::kDefault);

/// sum_k c_k a_k.
Matrix combine(std::span<const Matrix> vectors, const Matrix& coefficients);

/// U* T U for a unitary U. Throws PreconditionError for non-unitary U.
Matrix scalarize(const Matrix& t, const Matrix& u);

}  // namespace rkdet
