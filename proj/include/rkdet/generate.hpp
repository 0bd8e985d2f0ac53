#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>

#include "rkdet/hadamard.hpp"
#include "rkdet/inequalities.hpp"
#include "rkdet/matrix.hpp"
#include "rkdet/random.hpp"

namespace rkdet {

/// B*B with B a rank x n complex Gaussian matrix, exactly Hermitian.
Matrix random_psd(std::size_t n, std::size_t rank, Rng& rng);

/// B*B + epsilon ||B*B||_F I with B square complex Gaussian.
Matrix random_pd(std::size_t n, Rng& rng, double epsilon = 1e-3);

/// Factors A^p in M_s(M_{t_p}), each drawn by random_pd.
BlockFamily random_pd_family(std::size_t s, std::span<const std::size_t> t, Rng& rng,
                             double epsilon = 1e-3);

/// Random composition of n into positive block sizes.
BlockPartition random_partition(std::size_t n, Rng& rng);

enum class GenKind { Psd, Pd, PdBlock, EqualityFixture };

const char* to_string(GenKind kind);

struct GenSpec {
  GenKind kind = GenKind::Pd;
  std::size_t n = 2;
  std::optional<BlockPartition> partition;  // PdBlock
  std::optional<std::size_t> rank;          // Psd; defaults to n
  std::uint64_t seed = 0;
  double epsilon = 1e-3;
  std::optional<FixtureSpec> fixture;  // EqualityFixture
};

using Generated = std::variant<Matrix, BlockMatrix, BlockFamily>;

/// Deterministic in `spec`: the same spec always yields the same instance.
Generated generate(const GenSpec& spec);

}  // namespace rkdet
