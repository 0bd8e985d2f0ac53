#include "rkdet/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rkdet/errors.hpp"
#include "rkdet/rkhs.hpp"

namespace rkdet {

namespace {

void require_positive_definite(const Matrix& m, const char* what) {
  if (!m.is_square()) throw DimensionError(std::string(what) + ": expected a square matrix");
  if (!hermitian_check(m)) throw PreconditionError(std::string(what) + ": not Hermitian");
  if (psd_check(m) != Definiteness::PositiveDefinite) {
    throw PreconditionError(std::string(what) + ": not positive definite");
  }
}

// Block-diagonal unitary whose columns are the lexicographically ordered CONS {u_ij}.
Matrix ordered_basis(const BlockPartition& partition, std::span<const Matrix> bases) {
  if (bases.size() != partition.count()) {
    throw DimensionError("expected one basis per diagonal block");
  }
  for (std::size_t i = 1; i <= partition.count(); ++i) {
    const Matrix& u = bases[i - 1];
    if (u.rows() != partition.size(i) || u.cols() != partition.size(i)) {
      throw DimensionError("basis " + std::to_string(i) + " does not match its block size");
    }
    if (!is_unitary(u, 1e-8)) {
      throw PreconditionError("basis " + std::to_string(i) + " is not orthonormal");
    }
  }
  return block_diagonal(bases);
}

}  // namespace

IpipProblem IpipProblem::canonical(const Matrix& gram, std::size_t order) {
  if (!gram.is_square()) throw DimensionError("IpipProblem: Gram matrix must be square");
  if (order < 1 || order > gram.rows()) {
    throw IndexError("IpipProblem: order " + std::to_string(order) + " outside 1.." +
                     std::to_string(gram.rows()));
  }
  return IpipProblem{gram.block(0, 0, order, order), Matrix::unit(order, order - 1), order};
}

IpipSolution solve_ipip(const IpipProblem& problem, double tol) {
  const Matrix& g = problem.gram;
  const Matrix& b = problem.data;
  if (!g.is_square()) throw DimensionError("solve_ipip: Gram matrix must be square");
  if (b.cols() != 1 || b.rows() != g.rows()) {
    throw DimensionError("solve_ipip: data length does not match the Gram matrix");
  }
  if (!hermitian_check(g)) throw PreconditionError("solve_ipip: Gram matrix is not Hermitian");

  const Matrix pinv = moore_penrose(g);
  const Matrix c = pinv * b;
  if (vector_norm(g * c - b) > tol * (1.0 + vector_norm(b))) {
    return IpipSolution{};
  }
  return IpipSolution{c, std::sqrt(std::max(0.0, dot(c, b).real())), true};
}

double min_norm_bordered(const Matrix& gram, const Matrix& data) {
  require_positive_definite(gram, "min_norm_bordered");
  const std::size_t n = gram.rows();
  if (data.cols() != 1 || data.rows() != n) {
    throw DimensionError("min_norm_bordered: data length does not match the Gram matrix");
  }
  Matrix bordered(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    bordered(0, i + 1) = std::conj(data[i]);
    bordered(i + 1, 0) = data[i];
  }
  bordered.set_block(1, 1, gram);
  return -real_determinant(bordered) / real_determinant(gram);
}

std::vector<double> lambda_sequence(const Matrix& gram) {
  require_positive_definite(gram, "lambda_sequence");
  std::vector<double> out;
  out.reserve(gram.rows());
  double previous = 1.0;
  for (std::size_t k = 1; k <= gram.rows(); ++k) {
    const double current = real_determinant(gram.block(0, 0, k, k));
    out.push_back(std::sqrt(previous / current));
    previous = current;
  }
  return out;
}

std::vector<double> ipip_lambdas(const Matrix& gram) {
  require_positive_definite(gram, "ipip_lambdas");
  std::vector<double> out;
  out.reserve(gram.rows());
  for (std::size_t k = 1; k <= gram.rows(); ++k) {
    out.push_back(solve_ipip(IpipProblem::canonical(gram, k)).norm);
  }
  return out;
}

LambdaDetCheck lambda_det_identity_check(const Matrix& t, double tol) {
  require_positive_definite(t, "lambda_det_identity_check");
  const RkhsSpace space(t);
  std::vector<RkhsElement> columns;
  for (std::size_t k = 0; k < t.cols(); ++k) columns.push_back(space.element(t.col(k)));
  const Matrix gram = gram_matrix(columns);

  double product = 1.0;
  for (double lambda : ipip_lambdas(gram)) product *= lambda;
  const double inv_sqrt_det = 1.0 / std::sqrt(real_determinant(t));
  return {product, inv_sqrt_det, std::abs(product - inv_sqrt_det) <= tol * inv_sqrt_det};
}

std::vector<Matrix> block_eigenbases(const BlockMatrix& a) {
  std::vector<Matrix> bases;
  bases.reserve(a.block_count());
  for (std::size_t i = 1; i <= a.block_count(); ++i) {
    bases.push_back(eigh(a.block(i, i)).eigenvectors);
  }
  return bases;
}

std::vector<BlockLambdaProduct> block_lambda_products(const BlockMatrix& t,
                                                      std::span<const Matrix> bases) {
  require_positive_definite(t.data(), "block_lambda_products");
  const Matrix u = ordered_basis(t.partition(), bases);
  const RkhsSpace space(t);
  std::vector<RkhsElement> family;
  for (std::size_t k = 0; k < u.cols(); ++k) family.push_back(space.element(t.data() * u.col(k)));
  const std::vector<double> lambdas = ipip_lambdas(gram_matrix(family));

  std::vector<BlockLambdaProduct> out;
  for (std::size_t i = 1; i <= t.block_count(); ++i) {
    BlockLambdaProduct entry{{}, 1.0, 0.0};
    for (std::size_t k = t.partition().offset(i); k < t.partition().offset(i + 1); ++k) {
      entry.lambdas.push_back(lambdas[k]);
      entry.lambda_product *= lambdas[k];
    }
    entry.minor_ratio = std::sqrt(real_determinant(leading_principal_block(t, i - 1)) /
                                  real_determinant(leading_principal_block(t, i)));
    out.push_back(std::move(entry));
  }
  return out;
}

BlockIpipResult block_ipip_min_norm(const BlockMatrix& a, std::span<const Matrix> bases,
                                    std::size_t i, std::size_t j, double tol) {
  require_positive_definite(a.data(), "block_ipip_min_norm");
  const auto& part = a.partition();
  if (i < 1 || i > part.count() || j < 1 || j > part.size(i)) {
    throw IndexError("block_ipip_min_norm: index (" + std::to_string(i) + ", " +
                     std::to_string(j) + ") out of range");
  }
  const Matrix u = ordered_basis(part, bases);
  const std::size_t order = part.offset(i) + j;

  // <A u_l, A u_k>_{H_A} = u_k* A u_l: the scalarized kernel.
  const Matrix gram = scalarize(a.data(), u);
  IpipSolution solution = solve_ipip(IpipProblem::canonical(gram, order));
  if (!solution.feasible) throw PreconditionError("block_ipip_min_norm: IPIP has no solution");

  const Matrix kernel_family = a.data() * u.block(0, 0, u.rows(), order);
  const Matrix f = kernel_family * *solution.coefficients;

  const Matrix uij = u.col(order - 1);
  const Matrix a_uij = a.data() * uij;
  const double diagonal_value = dot(a_uij, uij).real();
  const double bound = 1.0 / std::sqrt(diagonal_value);

  double coupling = 0.0;
  for (std::size_t k = 0; k + 1 < order; ++k) coupling = std::max(coupling, std::abs(gram(k, order - 1)));

  const std::size_t lead = part.offset(i);
  const bool vanish =
      lead == 0 || vector_norm(a_uij.block(0, 0, lead, 1)) <=
                       10.0 * std::sqrt(tol) * (1.0 + vector_norm(a_uij));

  const double lambda = solution.norm;
  return BlockIpipResult{std::move(solution),
                         f,
                         lambda,
                         bound,
                         diagonal_value,
                         coupling,
                         std::abs(lambda - bound) <= tol * (1.0 + bound),
                         vanish};
}

std::vector<Matrix> gram_schmidt(std::span<const Matrix> vectors, double tol) {
  std::vector<Matrix> out;
  out.reserve(vectors.size());
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    Matrix v = vectors[k];
    const double original = vector_norm(v);
    for (const auto& q : out) v -= dot(v, q) * q;
    const double residual = vector_norm(v);
    if (original == 0.0 || residual <= tol * original) {
      throw RankError("gram_schmidt: vector " + std::to_string(k + 1) +
                      " depends on its predecessors");
    }
    out.push_back((1.0 / residual) * v);
  }
  return out;
}

Matrix combine(std::span<const Matrix> vectors, const Matrix& coefficients) {
  if (vectors.empty() || coefficients.cols() != 1 || coefficients.rows() != vectors.size()) {
    throw DimensionError("combine: one coefficient per vector expected");
  }
  Matrix out(vectors.front().rows(), 1);
  for (std::size_t k = 0; k < vectors.size(); ++k) out += coefficients[k] * vectors[k];
  return out;
}

Matrix scalarize(const Matrix& t, const Matrix& u) {
  if (!t.is_square() || !u.is_square() || t.rows() != u.rows()) {
    throw DimensionError("scalarize: T and U must be square of equal size");
  }
  if (!is_unitary(u, 1e-8)) throw PreconditionError("scalarize: basis is not orthonormal");
  return u.adjoint() * t * u;
}

}  // namespace rkdet
