#include "rkdet/generate.hpp"

#include "rkdet/errors.hpp"

namespace rkdet {

namespace {

Matrix gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix b(rows, cols);
  for (std::size_t k = 0; k < rows * cols; ++k) b[k] = rng.complex_normal();
  return b;
}

// Exact Hermitian symmetrisation: real diagonal, mirrored upper triangle.
Matrix symmetrize(Matrix m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    m(r, r) = m(r, r).real();
    for (std::size_t c = r + 1; c < m.cols(); ++c) m(c, r) = std::conj(m(r, c));
  }
  return m;
}

}  // namespace

Matrix random_psd(std::size_t n, std::size_t rank, Rng& rng) {
  if (n == 0 || rank == 0) throw DimensionError("random_psd: dimension and rank must be positive");
  const Matrix b = gaussian(rank, n, rng);
  return symmetrize(b.adjoint() * b);
}

Matrix random_pd(std::size_t n, Rng& rng, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigurationError("random_pd: epsilon must be positive");
  Matrix m = random_psd(n, n, rng);
  const double shift = epsilon * m.frobenius_norm();
  for (std::size_t k = 0; k < n; ++k) m(k, k) += shift;
  return m;
}

BlockFamily random_pd_family(std::size_t s, std::span<const std::size_t> t, Rng& rng,
                             double epsilon) {
  if (s == 0 || t.empty()) throw DimensionError("random_pd_family: needs s >= 1 and m >= 1");
  std::vector<BlockMatrix> factors;
  for (std::size_t size : t) {
    if (size == 0) throw DimensionError("random_pd_family: block size must be positive");
    factors.emplace_back(random_pd(s * size, rng, epsilon), BlockPartition::uniform(s, size));
  }
  return BlockFamily(std::move(factors));
}

BlockPartition random_partition(std::size_t n, Rng& rng) {
  if (n == 0) throw DimensionError("random_partition: dimension must be positive");
  std::vector<std::size_t> sizes;
  std::size_t current = 1;
  for (std::size_t k = 1; k < n; ++k) {
    if (rng.uniform() < 0.5) {
      sizes.push_back(current);
      current = 1;
    } else {
      ++current;
    }
  }
  sizes.push_back(current);
  return BlockPartition(std::move(sizes));
}

const char* to_string(GenKind kind) {
  switch (kind) {
    case GenKind::Psd: return "psd";
    case GenKind::Pd: return "pd";
    case GenKind::PdBlock: return "pd_block";
    case GenKind::EqualityFixture: return "equality_fixture";
  }
  return "unknown";
}

Generated generate(const GenSpec& spec) {
  Rng rng(spec.seed);
  switch (spec.kind) {
    case GenKind::Psd: {
      const std::size_t rank = spec.rank.value_or(spec.n);
      if (rank > spec.n) throw DimensionError("generate: rank exceeds dimension");
      return random_psd(spec.n, rank, rng);
    }
    case GenKind::Pd:
      if (spec.n == 0) throw DimensionError("generate: dimension must be positive");
      return random_pd(spec.n, rng, spec.epsilon);
    case GenKind::PdBlock: {
      if (!spec.partition) throw ConfigurationError("generate: pd_block needs a partition");
      return BlockMatrix(random_pd(spec.partition->dimension(), rng, spec.epsilon),
                         *spec.partition);
    }
    case GenKind::EqualityFixture: {
      if (!spec.fixture) throw ConfigurationError("generate: equality_fixture needs a fixture");
      FixtureSpec fixture = *spec.fixture;
      fixture.seed = spec.seed;
      return equality_case_constructor(fixture);
    }
  }
  throw ConfigurationError("generate: unknown kind");
}

}  // namespace rkdet
