#include "rkdet/rkhs.hpp"

#include <cmath>
#include <string>

#include "rkdet/errors.hpp"

namespace rkdet {

RkhsSpace::RkhsSpace(Matrix kernel, double range_tol)
    : kernel_(std::move(kernel)), pinv_(moore_penrose(kernel_)), range_tol_(range_tol) {
  validate();
}

RkhsSpace::RkhsSpace(Matrix kernel, BlockPartition partition, double range_tol)
    : kernel_(std::move(kernel)),
      pinv_(moore_penrose(kernel_)),
      partition_(std::move(partition)),
      range_tol_(range_tol) {
  if (partition_->dimension() != kernel_.rows()) {
    throw DimensionError("RkhsSpace: partition does not match kernel dimension");
  }
  validate();
}

RkhsSpace::RkhsSpace(const BlockMatrix& kernel, double range_tol)
    : RkhsSpace(kernel.data(), kernel.partition(), range_tol) {}

void RkhsSpace::validate() const {
  if (!kernel_.is_square()) throw DimensionError("RkhsSpace: kernel must be square");
  if (!hermitian_check(kernel_)) throw PreconditionError("RkhsSpace: kernel is not Hermitian");
  if (psd_check(kernel_) == Definiteness::Indefinite) {
    throw PreconditionError("RkhsSpace: kernel is not positive semidefinite");
  }
}

bool RkhsSpace::contains(const Matrix& v) const {
  if (v.cols() != 1 || v.rows() != dimension()) {
    throw DimensionError("RkhsSpace: expected a column of length " + std::to_string(dimension()));
  }
  const Matrix residual = kernel_ * (pinv_ * v) - v;
  return vector_norm(residual) <= range_tol_ * (1.0 + vector_norm(v));
}

void RkhsSpace::require_member(const Matrix& v, const char* what) const {
  if (!contains(v)) {
    throw OutOfRangeError(std::string(what) + ": vector is not in the range of the kernel");
  }
}

RkhsElement RkhsSpace::element(const Matrix& v) const {
  require_member(v, "RkhsSpace::element");
  return RkhsElement{v, this};
}

Complex RkhsSpace::inner(const Matrix& f, const Matrix& g) const {
  require_member(f, "rkhs_inner");
  require_member(g, "rkhs_inner");
  return dot(pinv_ * f, g);
}

double RkhsSpace::norm(const Matrix& v) const {
  require_member(v, "rkhs_norm");
  return std::sqrt(std::max(0.0, dot(pinv_ * v, v).real()));
}

Matrix RkhsSpace::kernel_column(std::size_t block) const {
  if (!partition_) throw ConfigurationError("kernel_column: space has no block partition");
  const auto& part = *partition_;
  return kernel_.block(0, part.offset(block), dimension(), part.size(block));
}

Complex rkhs_inner(const RkhsSpace& space, const RkhsElement& f, const RkhsElement& g) {
  if (f.space != &space || g.space != &space) {
    throw PreconditionError("rkhs_inner: elements belong to a different space");
  }
  return space.inner(f.vector, g.vector);
}

double rkhs_norm(const RkhsSpace& space, const Matrix& v) { return space.norm(v); }

Matrix kernel_column(const RkhsSpace& space, std::size_t block) {
  return space.kernel_column(block);
}

Matrix gram_matrix(std::span<const RkhsElement> vectors) {
  if (vectors.empty()) throw DimensionError("gram_matrix: empty family");
  const RkhsSpace* space = vectors.front().space;
  for (const auto& v : vectors) {
    if (v.space != space) throw PreconditionError("gram_matrix: elements from mixed spaces");
  }
  const std::size_t n = vectors.size();
  std::vector<Matrix> transformed;
  transformed.reserve(n);
  for (const auto& v : vectors) transformed.push_back(space->pinv() * v.vector);
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = dot(transformed[j], vectors[i].vector);
  return g;
}

SumCheck rkhs_sum_check(const Matrix& a, const Matrix& b, const Matrix& f, const Matrix& g,
                        double tol) {
  const RkhsSpace ha(a);
  const RkhsSpace hb(b);
  const RkhsSpace hab(a + b);
  const double nf = ha.norm(f);
  const double ng = hb.norm(g);
  const double nfg = hab.norm(f + g);

  SumCheck out{nfg * nfg, nf * nf + ng * ng, false, std::nullopt};

  const std::size_t n = a.rows();
  Matrix stacked(2 * n, n);
  stacked.set_block(0, 0, a);
  stacked.set_block(n, 0, b);
  Matrix target(2 * n, 1);
  target.set_block(0, 0, f);
  target.set_block(n, 0, g);
  const Matrix z = moore_penrose(stacked) * target;
  if (vector_norm(stacked * z - target) <= tol * (1.0 + vector_norm(target))) {
    out.witness = z;
  }
  out.equality = std::abs(out.lhs - out.rhs) <= tol * (1.0 + out.rhs) || out.witness.has_value();
  return out;
}

}  // namespace rkdet
