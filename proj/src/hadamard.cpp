#include "rkdet/hadamard.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rkdet/errors.hpp"
#include "rkdet/interpolation.hpp"
#include "rkdet/rkhs.hpp"

namespace rkdet {

namespace {

void require_factor_columns(const BlockFamily& family, std::span<const Matrix> factors) {
  if (factors.size() != family.size()) {
    throw DimensionError("expected " + std::to_string(family.size()) + " factors, got " +
                         std::to_string(factors.size()));
  }
  for (std::size_t p = 0; p < factors.size(); ++p) {
    if (factors[p].cols() != 1 || factors[p].rows() != family[p].dimension()) {
      throw DimensionError("factor " + std::to_string(p + 1) +
                           " does not match the dimension of its kernel");
    }
  }
}

void require_bases(const BlockFamily& family, const FamilyBases& bases) {
  if (bases.size() != family.size()) throw DimensionError("expected one basis set per factor");
  for (std::size_t p = 0; p < family.size(); ++p) {
    if (bases[p].size() != family.block_count()) {
      throw DimensionError("expected one basis per diagonal block");
    }
  }
}

// Column injecting c into block i of a space partitioned by `part`.
Matrix inject(const BlockPartition& part, std::size_t i, const Matrix& c) {
  Matrix out(part.dimension(), 1);
  out.set_block(part.offset(i), 0, c);
  return out;
}

}  // namespace

BlockFamily::BlockFamily(std::vector<BlockMatrix> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw DimensionError("BlockFamily: needs at least one factor");
  const std::size_t s = factors_.front().block_count();
  for (std::size_t p = 0; p < factors_.size(); ++p) {
    const auto& a = factors_[p];
    if (a.block_count() != s) {
      throw DimensionError("BlockFamily: factor " + std::to_string(p + 1) + " has " +
                           std::to_string(a.block_count()) + " blocks, expected " +
                           std::to_string(s));
    }
    if (!hermitian_check(a.data())) {
      throw PreconditionError("BlockFamily: factor " + std::to_string(p + 1) +
                              " is not Hermitian");
    }
    if (psd_check(a.data()) == Definiteness::Indefinite) {
      throw PreconditionError("BlockFamily: factor " + std::to_string(p + 1) +
                              " is not positive semidefinite");
    }
  }
}

bool BlockFamily::all_positive_definite() const {
  return std::all_of(factors_.begin(), factors_.end(), [](const BlockMatrix& a) {
    return psd_check(a.data()) == Definiteness::PositiveDefinite;
  });
}

BlockMatrix khatri_rao(const BlockFamily& family) {
  const std::size_t s = family.block_count();
  std::vector<std::size_t> sizes(s, 1);
  for (std::size_t i = 1; i <= s; ++i)
    for (const auto& a : family.factors()) sizes[i - 1] *= a.partition().size(i);
  BlockPartition part(sizes);

  Matrix out(part.dimension(), part.dimension());
  for (std::size_t i = 1; i <= s; ++i) {
    for (std::size_t j = 1; j <= s; ++j) {
      Matrix block = family[0].block(i, j);
      for (std::size_t p = 1; p < family.size(); ++p) block = kronecker(block, family[p].block(i, j));
      out.set_block(part.offset(i), part.offset(j), block);
    }
  }
  return BlockMatrix(std::move(out), std::move(part));
}

Matrix tensor_kernel(const BlockFamily& family) {
  Matrix out = family[0].data();
  for (std::size_t p = 1; p < family.size(); ++p) out = kronecker(out, family[p].data());
  return out;
}

Matrix simple_tensor(std::span<const Matrix> factors) {
  if (factors.empty()) throw DimensionError("simple_tensor: no factors");
  Matrix out = factors.front();
  for (std::size_t p = 1; p < factors.size(); ++p) out = kronecker(out, factors[p]);
  return out;
}

Matrix diagonal_restriction(const BlockFamily& family, const Matrix& tensor) {
  const std::size_t m = family.size();
  std::vector<std::size_t> dims(m);
  std::size_t total = 1;
  for (std::size_t p = 0; p < m; ++p) {
    dims[p] = family[p].dimension();
    total *= dims[p];
  }
  if (tensor.cols() != 1 || tensor.rows() != total) {
    throw DimensionError("diagonal_restriction: tensor column has the wrong length");
  }

  const BlockPartition out_part = khatri_rao(family).partition();
  Matrix out(out_part.dimension(), 1);
  std::size_t at = 0;
  std::vector<std::size_t> local(m);
  for (std::size_t i = 1; i <= family.block_count(); ++i) {
    std::fill(local.begin(), local.end(), 0);
    for (std::size_t r = 0; r < out_part.size(i); ++r) {
      std::size_t flat = 0;
      for (std::size_t p = 0; p < m; ++p) {
        flat = flat * dims[p] + family[p].partition().offset(i) + local[p];
      }
      out[at++] = tensor[flat];
      // advance the mixed-radix counter, last factor fastest
      for (std::size_t p = m; p-- > 0;) {
        if (++local[p] < family[p].partition().size(i)) break;
        local[p] = 0;
      }
    }
  }
  return out;
}

Matrix diagonal_pullback(const BlockFamily& family, std::span<const Matrix> factors) {
  require_factor_columns(family, factors);
  const BlockPartition out_part = khatri_rao(family).partition();
  Matrix out(out_part.dimension(), 1);
  for (std::size_t i = 1; i <= family.block_count(); ++i) {
    std::vector<Matrix> segments;
    for (std::size_t p = 0; p < family.size(); ++p) {
      const auto& part = family[p].partition();
      segments.push_back(factors[p].block(part.offset(i), 0, part.size(i), 1));
    }
    out.set_block(out_part.offset(i), 0, simple_tensor(segments));
  }
  return out;
}

RestrictionCheck restriction_inequality_check(const BlockFamily& family, const Matrix& tensor,
                                              double tol) {
  const RkhsSpace tensor_space(tensor_kernel(family));
  const RkhsSpace hadamard_space(khatri_rao(family));
  const double full = tensor_space.norm(tensor);
  const double pulled = hadamard_space.norm(diagonal_restriction(family, tensor));
  const double slack = tol * (1.0 + full);
  return {full, pulled, pulled <= full + slack, std::abs(full - pulled) <= slack};
}

ExtremalCheck extremal_simple_tensor_check(const BlockFamily& family,
                                           std::span<const Matrix> factors, double tol) {
  require_factor_columns(family, factors);
  if (family.size() < 2) throw PreconditionError("extremal_simple_tensor_check: needs m >= 2");
  if (!family.all_positive_definite()) {
    throw PreconditionError("extremal_simple_tensor_check: kernels must be positive definite");
  }
  for (std::size_t p = 0; p < factors.size(); ++p) {
    if (vector_norm(factors[p]) == 0.0) {
      throw PreconditionError("extremal_simple_tensor_check: factor " + std::to_string(p + 1) +
                              " is zero");
    }
  }

  for (std::size_t i = 1; i <= family.block_count(); ++i) {
    bool all_in_range = true;
    for (std::size_t p = 0; p < family.size() && all_in_range; ++p) {
      const auto& a = family[p];
      const Matrix column_block = a.data().block(0, a.partition().offset(i), a.dimension(),
                                                 a.partition().size(i));
      std::vector<Matrix> columns;
      for (std::size_t k = 0; k < column_block.cols(); ++k) columns.push_back(column_block.col(k));
      Matrix residual = factors[p];
      for (const auto& q : gram_schmidt(columns)) residual -= dot(factors[p], q) * q;
      all_in_range = vector_norm(residual) <= tol * (1.0 + vector_norm(factors[p]));
    }
    if (all_in_range) return {true, i};
  }
  return {false, std::nullopt};
}

FamilyBases family_eigenbases(const BlockFamily& family) {
  FamilyBases out;
  for (const auto& a : family.factors()) out.push_back(block_eigenbases(a));
  return out;
}

std::vector<Matrix> khatri_rao_bases(const BlockFamily& family, const FamilyBases& bases) {
  require_bases(family, bases);
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < family.block_count(); ++i) {
    Matrix u = bases[0][i];
    for (std::size_t p = 1; p < family.size(); ++p) u = kronecker(u, bases[p][i]);
    out.push_back(std::move(u));
  }
  return out;
}

MainBoundResult theorem_main_min_norm(const BlockFamily& family, const FamilyBases& bases,
                                      const TensorIndex& gamma, double tol) {
  require_bases(family, bases);
  if (!family.all_positive_definite()) {
    throw PreconditionError("theorem_main_min_norm: kernels must be positive definite");
  }
  const std::size_t m = family.size();
  const std::size_t i = gamma.block;
  if (i < 1 || i > family.block_count() || gamma.positions.size() != m) {
    throw IndexError("theorem_main_min_norm: malformed tensor index");
  }

  // Lexicographic rank of (j_1, ..., j_m) inside J_i.
  std::size_t position = 0;
  for (std::size_t p = 0; p < m; ++p) {
    const std::size_t n_ip = family[p].partition().size(i);
    const std::size_t j = gamma.positions[p];
    if (j < 1 || j > n_ip) throw IndexError("theorem_main_min_norm: position out of range");
    position = position * n_ip + (j - 1);
  }

  const BlockMatrix kr = khatri_rao(family);
  const std::vector<Matrix> kr_bases = khatri_rao_bases(family, bases);
  const BlockIpipResult target = block_ipip_min_norm(kr, kr_bases, i, position + 1);

  MainBoundResult out{target.lambda, 0.0, false, false, {}, {}, Matrix(1, 1), 0.0, 0.0, {}};
  std::vector<Matrix> scaled_kernels;
  std::vector<Matrix> differences;
  double lambda_product = 1.0;
  double alpha_product = 1.0;
  double excess_product = 1.0;
  for (std::size_t p = 0; p < m; ++p) {
    const auto& a = family[p];
    const BlockIpipResult factor = block_ipip_min_norm(a, bases[p], i, gamma.positions[p]);
    const double lambda2 = factor.lambda * factor.lambda;
    const double alpha = lambda2 * factor.diagonal_value;
    out.factor_lambdas.push_back(factor.lambda);
    out.factor_alphas.push_back(alpha);
    lambda_product *= factor.lambda;
    alpha_product *= alpha;
    excess_product *= alpha - 1.0;

    const Matrix c = bases[p][i - 1].col(gamma.positions[p] - 1);
    const Matrix kernel_vector = a.data() * inject(a.partition(), i, c);
    scaled_kernels.push_back(lambda2 * kernel_vector);
    differences.push_back(lambda2 * kernel_vector - factor.function);
  }
  const double denominator = alpha_product - excess_product;
  out.upper_bound = lambda_product / std::sqrt(denominator);
  out.holds = out.lambda <= out.upper_bound + tol * (1.0 + out.upper_bound);
  out.equality = std::abs(out.lambda - out.upper_bound) <= tol * (1.0 + out.upper_bound);

  const Matrix h = diagonal_pullback(family, scaled_kernels) - diagonal_pullback(family, differences);
  out.candidate = (1.0 / denominator) * h;

  const RkhsSpace space(kr);
  const Matrix u = block_diagonal(kr_bases);
  const std::size_t order = kr.partition().offset(i) + position + 1;
  double residual = 0.0;
  for (std::size_t k = 0; k < order; ++k) {
    const Complex value = space.inner(out.candidate, kr.data() * u.col(k));
    const double expected = k + 1 == order ? 1.0 : 0.0;
    residual = std::max(residual, std::abs(value - expected));
  }
  out.candidate_residual = residual;
  out.candidate_norm = space.norm(out.candidate);
  if (out.equality) out.minimizer = out.candidate;
  return out;
}

}  // namespace rkdet
