#include "rkdet/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <utility>

#include "rkdet/errors.hpp"
#include "rkdet/generate.hpp"
#include "rkdet/random.hpp"

namespace rkdet {

namespace {

constexpr double kStructural = 1e-9;
constexpr int kMaxResamples = 64;

double ipow(double base, std::uint64_t exponent) {
  double result = 1.0;
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    base *= base;
    exponent >>= 1U;
  }
  return result;
}

void require_psd(const Matrix& a, const char* who) {
  if (!a.is_square()) throw DimensionError(std::string(who) + ": matrix is not square");
  if (!hermitian_check(a)) throw PreconditionError(std::string(who) + ": matrix is not Hermitian");
  if (psd_check(a) == Definiteness::Indefinite) {
    throw PreconditionError(std::string(who) + ": matrix is not positive semidefinite");
  }
}

bool is_pd(const Matrix& a) { return psd_check(a) == Definiteness::PositiveDefinite; }

double diagonal_product(const Matrix& a) {
  double out = 1.0;
  for (std::size_t k = 0; k < a.rows(); ++k) out *= a(k, k).real();
  return out;
}

// Frobenius-norm zero test relative to the whole factor.
bool negligible(const Matrix& block, const Matrix& whole) {
  return block.frobenius_norm() <= kStructural * (1.0 + whole.frobenius_norm());
}

bool block_diagonal_structure(const BlockMatrix& a) {
  for (std::size_t i = 1; i <= a.block_count(); ++i)
    for (std::size_t j = i + 1; j <= a.block_count(); ++j)
      if (!negligible(a.block(i, j), a.data())) return false;
  return true;
}

double leading_det(const BlockMatrix& x, std::size_t i) {
  return real_determinant(leading_principal_block(x, i));
}

void require_uniform(const BlockFamily& family, const char* who) {
  for (std::size_t p = 0; p < family.size(); ++p) {
    if (!family[p].partition().is_uniform()) {
      throw DimensionError(std::string(who) + ": factor " + std::to_string(p + 1) +
                           " does not have a uniform block size");
    }
  }
}

void require_pd_family(const BlockFamily& family, const char* who) {
  if (!family.all_positive_definite()) {
    throw PreconditionError(std::string(who) + ": factors must be positive definite");
  }
}

// Case (c) of the ratio inequality at block i: n_ip = 1 for all p and some
// i0 < i with A_li = A_l,i0 A_i0,i0^{-1} A_i0,i for every l < i and every p.
std::optional<std::size_t> schur_chain_anchor(const BlockFamily& family, std::size_t i) {
  for (const auto& a : family.factors())
    if (a.partition().size(i) != 1) return std::nullopt;
  for (std::size_t i0 = 1; i0 < i; ++i0) {
    bool all = true;
    for (std::size_t p = 0; p < family.size() && all; ++p) {
      const auto& a = family[p];
      const Matrix pivot = a.block(i0, i0);
      const auto eig = eigh(pivot);
      if (eig.eigenvalues.front() <= tol::kPsdCutoff * (1.0 + pivot.frobenius_norm())) {
        all = false;
        break;
      }
      const Matrix pivot_inv = moore_penrose(pivot);
      for (std::size_t l = 1; l < i && all; ++l) {
        const Matrix predicted = a.block(l, i0) * pivot_inv * a.block(i0, i);
        all = negligible(a.block(l, i) - predicted, a.data());
      }
    }
    if (all) return i0;
  }
  return std::nullopt;
}

std::optional<std::string> classify_block_theorem(const BlockFamily& family) {
  if (family.size() == 1) return "(a) m=1";
  if (family.block_count() == 1) return "(a) s=1";
  for (std::size_t p = 0; p < family.size(); ++p) {
    if (block_diagonal_structure(family[p])) {
      return "(b) factor " + std::to_string(p + 1) + " block diagonal";
    }
  }
  for (const auto& a : family.factors())
    if (!a.partition().is_scalar()) return std::nullopt;
  std::set<std::pair<std::size_t, std::size_t>> support;
  for (const auto& a : family.factors()) {
    const double scale = kStructural * (1.0 + a.data().frobenius_norm());
    for (std::size_t r = 0; r < a.dimension(); ++r)
      for (std::size_t c = r + 1; c < a.dimension(); ++c)
        if (std::abs(a.data()(r, c)) > scale) support.emplace(r + 1, c + 1);
  }
  if (support.size() == 1) {
    const auto [i, j] = *support.begin();
    return "(c) single off-diagonal pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
  }
  return std::nullopt;
}

BlockMatrix as_block(Matrix a) {
  const std::size_t n = a.rows();
  return BlockMatrix(std::move(a), BlockPartition::scalar(n));
}

}  // namespace

InequalityReport make_report(std::string name, double lhs, double rhs, double tol) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = lhs - rhs;
  r.tol_used = tol;
  r.scale = 1.0 + std::max(std::abs(lhs), std::abs(rhs));
  r.holds = r.margin >= -tol * r.scale;
  r.equality = r.holds && std::abs(r.margin) <= tol * r.scale;
  return r;
}

ExponentProfile exponent_profile(const BlockFamily& family) {
  ExponentProfile out;
  bool uniform = true;
  for (const auto& a : family.factors()) uniform = uniform && a.partition().is_uniform();
  if (uniform) {
    std::uint64_t total = 1;
    for (const auto& a : family.factors()) total *= a.partition().size(1);
    for (const auto& a : family.factors()) out.sigma_p.push_back(total / a.partition().size(1));
  }
  for (std::size_t i = 1; i <= family.block_count(); ++i) {
    std::uint64_t total = 1;
    for (const auto& a : family.factors()) total *= a.partition().size(i);
    std::vector<std::uint64_t> row;
    for (const auto& a : family.factors()) row.push_back(total / a.partition().size(i));
    out.sigma_ip.push_back(std::move(row));
  }
  return out;
}

InequalityReport elementary_inequality(const RealGrid& a, double tol) {
  if (a.empty() || a.front().empty()) throw DimensionError("elementary_inequality: empty grid");
  const std::size_t n = a.size();
  const std::size_t m = a.front().size();
  for (const auto& row : a) {
    if (row.size() != m) throw DimensionError("elementary_inequality: ragged grid");
    for (double v : row) {
      if (!(v >= 1.0 - 1e-12)) {
        throw PreconditionError("elementary_inequality: entries must be at least 1");
      }
    }
  }

  double lhs = 1.0;
  for (const auto& row : a) {
    double full = 1.0;
    double shifted = 1.0;
    for (double v : row) {
      full *= v;
      shifted *= v - 1.0;
    }
    lhs *= full - shifted;
  }
  double column_full = 1.0;
  double column_shifted = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    double c = 1.0;
    for (std::size_t i = 0; i < n; ++i) c *= a[i][j];
    column_full *= c;
    column_shifted *= c - 1.0;
  }
  InequalityReport r = make_report("elementary", lhs, column_full - column_shifted, tol);

  auto is_one = [tol](double v) { return std::abs(v - 1.0) <= tol; };
  auto row_ones = [&](std::size_t i) { return std::all_of(a[i].begin(), a[i].end(), is_one); };
  if (m == 1 || n == 1) {
    r.equality_case = "(i) m=1 or n=1";
  } else {
    for (std::size_t j = 0; j < m && !r.equality_case; ++j) {
      bool ones = true;
      for (std::size_t i = 0; i < n; ++i) ones = ones && is_one(a[i][j]);
      if (ones) r.equality_case = "(ii) all-ones column";
    }
    if (!r.equality_case) {
      std::size_t other = 0;
      for (std::size_t i = 0; i < n; ++i) other += row_ones(i) ? 0 : 1;
      if (other <= 1) r.equality_case = "(iii) all-ones off rows";
    }
  }
  return r;
}

InequalityReport hadamard_inequality(const Matrix& a, double tol) {
  require_psd(a, "hadamard_inequality");
  InequalityReport r = make_report("hadamard", diagonal_product(a), real_determinant(a), tol);
  if (block_diagonal_structure(as_block(a))) r.equality_case = "diagonal";
  return r;
}

InequalityReport oppenheim(const Matrix& a, const Matrix& b, double tol) {
  require_psd(a, "oppenheim");
  require_psd(b, "oppenheim");
  if (a.rows() != b.rows()) throw DimensionError("oppenheim: dimension mismatch");
  return make_report("oppenheim", real_determinant(hadamard(a, b)),
                     real_determinant(a) * diagonal_product(b), tol);
}

InequalityReport oppenheim_schur(const Matrix& a, const Matrix& b, double tol) {
  require_psd(a, "oppenheim_schur");
  require_psd(b, "oppenheim_schur");
  if (a.rows() != b.rows()) throw DimensionError("oppenheim_schur: dimension mismatch");
  const double det_a = real_determinant(a);
  const double det_b = real_determinant(b);
  const double lhs = real_determinant(hadamard(a, b)) + det_a * det_b;
  const double rhs = det_a * diagonal_product(b) + det_b * diagonal_product(a);
  InequalityReport r = make_report("oppenheim-schur", lhs, rhs, tol);
  if (is_pd(a) && is_pd(b)) r.equality_case = classify_block_theorem(BlockFamily({as_block(a), as_block(b)}));
  return r;
}

InequalityReport fischer(const BlockMatrix& a, double tol) {
  require_psd(a.data(), "fischer");
  double lhs = 1.0;
  for (std::size_t i = 1; i <= a.block_count(); ++i) lhs *= real_determinant(a.block(i, i));
  InequalityReport r = make_report("fischer", lhs, real_determinant(a.data()), tol);
  if (is_pd(a.data()) && block_diagonal_structure(a)) r.equality_case = "block diagonal";
  return r;
}

std::vector<double> block_determinant_ratios(const BlockMatrix& x) {
  std::vector<double> out;
  double previous = 1.0;
  for (std::size_t i = 1; i <= x.block_count(); ++i) {
    const double current = leading_det(x, i);
    out.push_back(current / previous);
    previous = current;
  }
  return out;
}

InequalityReport block_ratio_inequality(const BlockFamily& family, std::size_t i, double tol) {
  require_pd_family(family, "block_ratio_inequality");
  if (i < 1 || i > family.block_count()) {
    throw IndexError("block_ratio_inequality: block " + std::to_string(i) + " out of range");
  }
  const ExponentProfile sigma = exponent_profile(family);
  const BlockMatrix kr = khatri_rao(family);
  const double lhs = leading_det(kr, i) / leading_det(kr, i - 1);

  double full = 1.0;
  double excess = 1.0;
  for (std::size_t p = 0; p < family.size(); ++p) {
    const auto& a = family[p];
    const std::uint64_t s = sigma.sigma_ip[i - 1][p];
    const double d = ipow(real_determinant(a.block(i, i)), s);
    const double r = ipow(leading_det(a, i) / leading_det(a, i - 1), s);
    full *= d;
    excess *= d - r;
  }
  InequalityReport r = make_report("block-ratio", lhs, full - excess, tol);

  if (family.size() == 1 || i == 1) {
    r.equality_case = family.size() == 1 ? "(a) m=1" : "(a) i=1";
    return r;
  }
  for (std::size_t p = 0; p < family.size(); ++p) {
    const auto& a = family[p];
    bool zero = true;
    for (std::size_t l = 1; l < i && zero; ++l) zero = negligible(a.block(l, i), a.data());
    if (zero) {
      r.equality_case = "(b) factor " + std::to_string(p + 1) + " decoupled at block " +
                        std::to_string(i);
      return r;
    }
  }
  if (const auto anchor = schur_chain_anchor(family, i)) {
    r.equality_case = "(c) Schur chain through block " + std::to_string(*anchor);
  }
  return r;
}

InequalityReport block_oppenheim_schur(const BlockFamily& family, double tol) {
  require_uniform(family, "block_oppenheim_schur");
  const ExponentProfile sigma = exponent_profile(family);
  const double lhs = real_determinant(khatri_rao(family).data());

  double full = 1.0;
  double excess = 1.0;
  for (std::size_t p = 0; p < family.size(); ++p) {
    const auto& a = family[p];
    double diag = 1.0;
    for (std::size_t i = 1; i <= a.block_count(); ++i) diag *= real_determinant(a.block(i, i));
    const double d = ipow(diag, sigma.sigma_p[p]);
    full *= d;
    excess *= d - ipow(real_determinant(a.data()), sigma.sigma_p[p]);
  }
  InequalityReport r = make_report("block-oppenheim-schur", lhs, full - excess, tol);
  if (family.all_positive_definite()) r.equality_case = classify_block_theorem(family);
  return r;
}

OppenheimSchurChain oppenheim_schur_chain(const BlockFamily& family) {
  require_uniform(family, "oppenheim_schur_chain");
  require_pd_family(family, "oppenheim_schur_chain");
  OppenheimSchurChain out{real_determinant(khatri_rao(family).data()), {}, {}, 1.0, 0.0};
  for (std::size_t i = 1; i <= family.block_count(); ++i) {
    const InequalityReport r = block_ratio_inequality(family, i);
    out.ratio_lhs.push_back(r.lhs);
    out.ratio_rhs.push_back(r.rhs);
    out.chained *= r.rhs;
  }
  out.final_rhs = block_oppenheim_schur(family).rhs;
  return out;
}

const char* to_string(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::BlockDiagonal: return "block_diagonal";
    case FixtureKind::ArrowPair: return "arrow_pair";
    case FixtureKind::SchurComplementChain: return "schur_complement_chain";
  }
  return "unknown";
}

namespace {

std::vector<std::size_t> fixture_block_sizes(const FixtureSpec& spec) {
  if (spec.factors == 0 || spec.blocks == 0) {
    throw ConfigurationError("equality_case_constructor: needs m >= 1 and s >= 1");
  }
  if (spec.block_size.empty()) return std::vector<std::size_t>(spec.factors, 1);
  if (spec.block_size.size() != spec.factors) {
    throw ConfigurationError("equality_case_constructor: one block size per factor required");
  }
  for (std::size_t t : spec.block_size) {
    if (t == 0) throw ConfigurationError("equality_case_constructor: block size must be positive");
  }
  return spec.block_size;
}

BlockMatrix block_diagonal_factor(std::size_t s, std::size_t t, Rng& rng, double epsilon) {
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < s; ++i) blocks.push_back(random_pd(t, rng, epsilon));
  return BlockMatrix(block_diagonal(blocks), BlockPartition::uniform(s, t));
}

BlockMatrix arrow_factor(std::size_t s, std::size_t i, std::size_t j, Rng& rng) {
  Matrix a(s, s);
  for (std::size_t k = 0; k < s; ++k) a(k, k) = rng.uniform(1.0, 3.0);
  const double rho = rng.uniform(0.2, 0.8);
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const Complex off = rho * std::sqrt(a(i, i).real() * a(j, j).real()) * std::polar(1.0, theta);
  a(i, j) = off;
  a(j, i) = std::conj(off);
  return as_block(std::move(a));
}

BlockMatrix schur_chain_factor(std::size_t s, std::size_t anchor, Rng& rng, double epsilon) {
  const Matrix lead = random_pd(s - 1, rng, epsilon);
  const Complex w = rng.complex_normal();
  Matrix a(s, s);
  a.set_block(0, 0, lead);
  for (std::size_t l = 0; l + 1 < s; ++l) {
    a(l, s - 1) = lead(l, anchor) * w;
    a(s - 1, l) = std::conj(a(l, s - 1));
  }
  a(s - 1, s - 1) = std::norm(w) * lead(anchor, anchor).real() + 0.5 + rng.uniform();
  return as_block(std::move(a));
}

}  // namespace

BlockFamily equality_case_constructor(const FixtureSpec& spec) {
  const std::vector<std::size_t> t = fixture_block_sizes(spec);
  const std::size_t s = spec.blocks;
  const bool scalar = std::all_of(t.begin(), t.end(), [](std::size_t v) { return v == 1; });

  switch (spec.kind) {
    case FixtureKind::BlockDiagonal:
      break;
    case FixtureKind::ArrowPair:
      if (!scalar) throw ConfigurationError("arrow_pair fixtures need scalar blocks");
      if (spec.pair_i < 1 || spec.pair_j < 1 || spec.pair_i > s || spec.pair_j > s ||
          spec.pair_i == spec.pair_j) {
        throw ConfigurationError("arrow_pair fixtures need distinct blocks i, j within 1..s");
      }
      break;
    case FixtureKind::SchurComplementChain:
      if (!scalar) throw ConfigurationError("schur_complement_chain fixtures need scalar blocks");
      if (spec.chain_anchor < 1 || spec.chain_anchor >= s) {
        throw ConfigurationError("schur_complement_chain fixtures need 1 <= i0 < s");
      }
      break;
  }

  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
    std::vector<BlockMatrix> factors;
    for (std::size_t p = 0; p < spec.factors; ++p) {
      switch (spec.kind) {
        case FixtureKind::BlockDiagonal:
          if (p + 1 == spec.factors) {
            factors.push_back(block_diagonal_factor(s, t[p], rng, spec.epsilon));
          } else {
            factors.emplace_back(random_pd(s * t[p], rng, spec.epsilon),
                                 BlockPartition::uniform(s, t[p]));
          }
          break;
        case FixtureKind::ArrowPair:
          factors.push_back(arrow_factor(s, spec.pair_i - 1, spec.pair_j - 1, rng));
          break;
        case FixtureKind::SchurComplementChain:
          factors.push_back(schur_chain_factor(s, spec.chain_anchor - 1, rng, spec.epsilon));
          break;
      }
    }
    const bool pd = std::all_of(factors.begin(), factors.end(),
                                [](const BlockMatrix& a) { return is_pd(a.data()); });
    if (pd) return BlockFamily(std::move(factors));
  }
  throw GenerationError("equality_case_constructor: no positive definite sample after " +
                        std::to_string(kMaxResamples) + " attempts");
}

}  // namespace rkdet
