#include "rkdet/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <tuple>

#include "rkdet/errors.hpp"
#include "rkdet/generate.hpp"
#include "rkdet/hadamard.hpp"
#include "rkdet/inequalities.hpp"
#include "rkdet/interpolation.hpp"
#include "rkdet/linalg.hpp"
#include "rkdet/oracles.hpp"
#include "rkdet/random.hpp"
#include "rkdet/rkhs.hpp"

namespace rkdet {

namespace {

class Digest {
 public:
  void add(double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    for (int k = 0; k < 8; ++k) {
      hash_ ^= (bits >> (8 * k)) & 0xffU;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add(const Matrix& m) {
    add(static_cast<double>(m.rows()));
    add(static_cast<double>(m.cols()));
    for (const Complex& z : m.entries()) {
      add(z.real());
      add(z.imag());
    }
  }
  void add(const BlockFamily& family) {
    for (const auto& a : family.factors()) add(a.data());
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

struct Context {
  Rng rng;
  std::size_t max_dim;
  Digest digest;

  std::size_t dim(std::size_t lo, std::size_t hi) {
    hi = std::max(lo, std::min(hi, max_dim));
    return lo + rng.below(hi - lo + 1);
  }
  Matrix gaussian(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t k = 0; k < rows * cols; ++k) m[k] = rng.complex_normal();
    return m;
  }
  Matrix pd(std::size_t n) {
    Matrix m = random_pd(n, rng);
    digest.add(m);
    return m;
  }
  Matrix psd(std::size_t n, std::size_t rank) {
    Matrix m = random_psd(n, rank, rng);
    digest.add(m);
    return m;
  }
  BlockFamily family(std::size_t m, std::size_t s, std::size_t max_t) {
    std::vector<std::size_t> t(m);
    for (auto& v : t) v = 1 + rng.below(std::max<std::size_t>(1, std::min(max_t, max_dim / s)));
    BlockFamily f = random_pd_family(s, t, rng);
    digest.add(f);
    return f;
  }
};

// Slack of `error` against `tol`: non-negative iff error <= tol.
double slack(double error, double tol) { return std::isnan(error) ? -1.0 : tol - error; }

double relative(double value, double reference) {
  return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

double report_slack(const InequalityReport& r) { return r.margin / r.scale + r.tol_used; }

double determinant_oracle(Context& c) {
  const std::size_t n = c.dim(1, 4);
  const Matrix m = c.gaussian(n, n);
  c.digest.add(m);
  double bound = 1.0;
  for (std::size_t r = 0; r < n; ++r) bound *= vector_norm(m.block(r, 0, 1, n).adjoint());
  return slack(std::abs(determinant(m) - oracle::cofactor_determinant(m)) / (1.0 + bound), 1e-9);
}

double eigh_reconstruction(Context& c) {
  const std::size_t n = c.dim(1, 8);
  const Matrix m = c.psd(n, 1 + c.rng.below(n));
  const auto eig = eigh(m);
  const Matrix rebuilt = eig.eigenvectors * Matrix::diagonal(eig.eigenvalues) *
                         eig.eigenvectors.adjoint();
  const double err = (rebuilt - m).frobenius_norm() / (1.0 + m.frobenius_norm());
  const double orth = (eig.eigenvectors.adjoint() * eig.eigenvectors - Matrix::identity(n))
                          .frobenius_norm();
  return slack(std::max(err, orth), 1e-9);
}

double penrose_identities(Context& c) {
  const std::size_t rows = c.dim(2, 6);
  const std::size_t cols = c.dim(2, 6);
  const std::size_t rank = 1 + c.rng.below(std::min(rows, cols));
  Matrix a(rows, cols);
  if (c.rng.uniform() < 0.5) {
    a = random_psd(rows, rank, c.rng);
  } else {
    const Matrix left = c.gaussian(rows, rank);
    a = left * c.gaussian(rank, cols);
  }
  c.digest.add(a);
  const Matrix x = moore_penrose(a);
  const Matrix ax = a * x;
  const Matrix xa = x * a;
  const double e1 = (ax * a - a).frobenius_norm() / (1.0 + a.frobenius_norm());
  const double e2 = (xa * x - x).frobenius_norm() / (1.0 + x.frobenius_norm());
  const double e3 = (ax.adjoint() - ax).frobenius_norm() / (1.0 + ax.frobenius_norm());
  const double e4 = (xa.adjoint() - xa).frobenius_norm() / (1.0 + xa.frobenius_norm());
  return slack(std::max({e1, e2, e3, e4}), 1e-8);
}

double lambda_det_identity(Context& c) {
  const Matrix t = c.pd(c.dim(2, 8));
  const LambdaDetCheck check = lambda_det_identity_check(t);
  const double ratio = check.product / check.inv_sqrt_det;
  return slack(std::abs(ratio * ratio - 1.0), 1e-7);
}

double bordered_vs_direct(Context& c) {
  const std::size_t n = c.dim(1, 8);
  const Matrix g = c.pd(n);
  const Matrix b = c.gaussian(n, 1);
  c.digest.add(b);
  const IpipSolution direct = solve_ipip({g, b, std::nullopt});
  if (!direct.feasible) return -1.0;
  const double bordered = min_norm_bordered(g, b);
  return slack(std::abs(bordered - direct.norm * direct.norm) / (direct.norm * direct.norm), 1e-8);
}

double ipip_oracle(Context& c) {
  const std::size_t n = c.dim(1, 4);
  const std::size_t rank = 1 + c.rng.below(n);
  const Matrix g = c.psd(n, rank);
  const Matrix b = c.rng.uniform() < 0.5 ? g * c.gaussian(n, 1) : c.gaussian(n, 1);
  c.digest.add(b);
  const IpipSolution direct = solve_ipip({g, b, std::nullopt});
  const std::optional<double> reference = oracle::least_norm_squared(g, b);
  if (direct.feasible != reference.has_value()) return -1.0;
  if (!direct.feasible) return 1.0;
  return slack(relative(direct.norm * direct.norm, *reference), 1e-8);
}

double block_lambda_identity(Context& c) {
  const std::size_t n = c.dim(2, 8);
  const BlockMatrix t(c.pd(n), random_partition(n, c.rng));
  double worst = 0.0;
  for (const auto& entry : block_lambda_products(t, block_eigenbases(t))) {
    worst = std::max(worst, std::abs(entry.lambda_product - entry.minor_ratio) / entry.minor_ratio);
  }
  return slack(worst, 1e-7);
}

double block_ipip_lower_bound(Context& c) {
  const std::size_t n = c.dim(2, 8);
  const BlockMatrix a(c.pd(n), random_partition(n, c.rng));
  const std::size_t i = 1 + c.rng.below(a.block_count());
  const std::size_t j = 1 + c.rng.below(a.partition().size(i));
  const BlockIpipResult r = block_ipip_min_norm(a, block_eigenbases(a), i, j);
  return r.lambda - (r.lower_bound - 1e-10);
}

double elementary_oracle(Context& c) {
  const std::size_t n = 1 + c.rng.below(3);
  const std::size_t m = 1 + c.rng.below(3);
  RealGrid a(n, std::vector<double>(m));
  for (auto& row : a)
    for (auto& v : row) {
      v = c.rng.uniform(1.0, 4.0);
      c.digest.add(v);
    }
  const InequalityReport r = elementary_inequality(a);
  const oracle::ElementarySums sums = oracle::elementary_enumeration(a);
  const double err = std::max(relative(r.lhs, sums.lhs), relative(r.rhs, sums.rhs));
  return std::min(slack(err, 1e-9), report_slack(r));
}

double scalar_inequalities(Context& c) {
  const std::size_t n = c.dim(2, 6);
  const Matrix a = c.psd(n, 1 + c.rng.below(n));
  const Matrix b = c.psd(n, 1 + c.rng.below(n));
  return std::min({report_slack(oppenheim_schur(a, b)), report_slack(oppenheim(a, b)),
                   report_slack(hadamard_inequality(a))});
}

double two_by_two_equality(Context& c) {
  const Matrix a = c.pd(2);
  const InequalityReport r = oppenheim_schur(a, c.pd(2));
  return r.equality && r.equality_case ? report_slack(r) : -1.0;
}

double fischer_random(Context& c) {
  const std::size_t n = c.dim(2, 8);
  return report_slack(fischer(BlockMatrix(c.pd(n), random_partition(n, c.rng))));
}

double block_theorem(Context& c) {
  const std::size_t m = 2 + c.rng.below(2);
  const std::size_t s = c.dim(2, 3);
  const BlockFamily family = c.family(m, s, 2);
  const InequalityReport total = block_oppenheim_schur(family, 1e-7);
  double worst = report_slack(total);
  for (std::size_t i = 1; i <= s; ++i) {
    worst = std::min(worst, report_slack(block_ratio_inequality(family, i, 1e-7)));
  }
  const OppenheimSchurChain chain = oppenheim_schur_chain(family);
  const double scale = 1.0 + std::abs(chain.determinant);
  worst = std::min(worst, (chain.determinant - chain.chained) / scale + 1e-7);
  worst = std::min(worst, (chain.chained - chain.final_rhs) /
                              (1.0 + std::max(std::abs(chain.chained), std::abs(chain.final_rhs))) +
                              1e-7);
  return worst;
}

double scalar_path_agreement(Context& c) {
  const std::size_t n = c.dim(2, 6);
  const Matrix a = c.pd(n);
  const Matrix b = c.pd(n);
  const InequalityReport scalar = oppenheim_schur(a, b);
  const InequalityReport block = block_oppenheim_schur(BlockFamily(
      {BlockMatrix(a, BlockPartition::scalar(n)), BlockMatrix(b, BlockPartition::scalar(n))}));
  return slack(std::abs(scalar.margin - block.margin) / scalar.scale, 1e-12);
}

double restriction_extremal(Context& c) {
  const std::size_t m = 2 + c.rng.below(2);
  const std::size_t s = c.dim(2, 3);
  const BlockFamily family = c.family(m, s, m == 2 ? 2 : 1);
  std::vector<Matrix> factors;
  const bool aligned = c.rng.uniform() < 0.5;
  const std::size_t i = 1 + c.rng.below(s);
  for (const auto& a : family.factors()) {
    const std::size_t n = a.dimension();
    if (aligned) {
      // f_p = k_i^p(x) lies in the range of the block-i kernel column.
      Matrix x(n, 1);
      x.set_block(a.partition().offset(i), 0, c.gaussian(a.partition().size(i), 1));
      factors.push_back(a.data() * x);
    } else {
      factors.push_back(a.data() * c.gaussian(n, 1));
    }
    c.digest.add(factors.back());
  }
  const RestrictionCheck norms = restriction_inequality_check(family, simple_tensor(factors));
  const ExtremalCheck structural = extremal_simple_tensor_check(family, factors);
  if (!norms.holds || norms.extremal != structural.extremal) return -1.0;
  return 1.0;
}

double main_bound(Context& c) {
  const std::size_t m = 2 + c.rng.below(2);
  const std::size_t s = c.dim(2, 3);
  const BlockFamily family = c.family(m, s, m == 2 ? 2 : 1);
  TensorIndex gamma{1 + c.rng.below(s), {}};
  for (const auto& a : family.factors()) {
    gamma.positions.push_back(1 + c.rng.below(a.partition().size(gamma.block)));
  }
  const MainBoundResult r = theorem_main_min_norm(family, family_eigenbases(family), gamma);
  const double scale = 1.0 + r.upper_bound;
  return std::min((r.upper_bound - r.lambda) / scale + 1e-7, slack(r.candidate_residual, 1e-7));
}

double fixture_equalities(Context& c) {
  FixtureSpec spec;
  spec.seed = c.rng.next();
  spec.factors = 2 + c.rng.below(2);
  spec.blocks = c.dim(2, 4);
  const std::size_t pick = c.rng.below(3);
  InequalityReport r;
  if (pick == 0) {
    spec.kind = FixtureKind::BlockDiagonal;
    spec.blocks = std::min<std::size_t>(spec.blocks, 3);
    spec.block_size.assign(spec.factors, 1 + c.rng.below(2));
    const BlockFamily family = equality_case_constructor(spec);
    c.digest.add(family);
    r = block_oppenheim_schur(family, 1e-7);
    if (!r.equality_case || r.equality_case->rfind("(b)", 0) != 0) return -1.0;
  } else if (pick == 1) {
    spec.kind = FixtureKind::ArrowPair;
    spec.blocks = std::max<std::size_t>(spec.blocks, 2);
    spec.pair_i = 1 + c.rng.below(spec.blocks);
    do spec.pair_j = 1 + c.rng.below(spec.blocks);
    while (spec.pair_j == spec.pair_i);
    const BlockFamily family = equality_case_constructor(spec);
    c.digest.add(family);
    r = block_oppenheim_schur(family, 1e-7);
    if (!r.equality_case || r.equality_case->rfind("(c)", 0) != 0) return -1.0;
  } else {
    spec.kind = FixtureKind::SchurComplementChain;
    spec.blocks = std::max<std::size_t>(spec.blocks, 3);
    spec.chain_anchor = 1 + c.rng.below(spec.blocks - 1);
    const BlockFamily family = equality_case_constructor(spec);
    c.digest.add(family);
    r = block_ratio_inequality(family, spec.blocks, 1e-7);
    if (!r.equality_case || r.equality_case->rfind("(c)", 0) != 0) return -1.0;
  }
  return r.equality ? report_slack(r) : -std::abs(r.margin) / r.scale;
}

double sum_inequality(Context& c) {
  const std::size_t n = c.dim(2, 6);
  const Matrix a = c.psd(n, 1 + c.rng.below(n));
  const Matrix b = c.psd(n, 1 + c.rng.below(n));
  const Matrix f = a * c.gaussian(n, 1);
  const Matrix g = b * c.gaussian(n, 1);
  const SumCheck r = rkhs_sum_check(a, b, f, g);
  return (r.rhs - r.lhs) / (1.0 + r.rhs) + 1e-8;
}

using Property = std::function<double(Context&)>;

const std::vector<std::pair<std::string, Property>>& registry() {
  static const std::vector<std::pair<std::string, Property>> properties = {
      {"determinant_oracle", determinant_oracle},
      {"eigh_reconstruction", eigh_reconstruction},
      {"penrose_identities", penrose_identities},
      {"lambda_det_identity", lambda_det_identity},
      {"bordered_vs_direct", bordered_vs_direct},
      {"ipip_oracle", ipip_oracle},
      {"block_lambda_identity", block_lambda_identity},
      {"block_ipip_lower_bound", block_ipip_lower_bound},
      {"elementary_oracle", elementary_oracle},
      {"scalar_inequalities", scalar_inequalities},
      {"two_by_two_equality", two_by_two_equality},
      {"fischer_random", fischer_random},
      {"block_theorem", block_theorem},
      {"scalar_path_agreement", scalar_path_agreement},
      {"restriction_extremal", restriction_extremal},
      {"main_bound", main_bound},
      {"fixture_equalities", fixture_equalities},
      {"sum_inequality", sum_inequality},
  };
  return properties;
}

PropertyOutcome evaluate(const Property& property, std::uint64_t seed, std::size_t max_dim) {
  Context c{Rng(seed), std::max<std::size_t>(max_dim, 2), Digest{}};
  const double margin = property(c);
  return {margin, c.digest.hex()};
}

}  // namespace

std::vector<std::string> property_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : registry()) out.push_back(name);
  return out;
}

PropertyOutcome run_property(const std::string& name, std::uint64_t seed, std::size_t max_dim) {
  for (const auto& [candidate, property] : registry()) {
    if (candidate == name) return evaluate(property, seed, max_dim);
  }
  throw ConfigurationError("unknown property: " + name);
}

SuiteResult run_suite(std::size_t trials, std::uint64_t seed, std::size_t max_dim) {
  const auto start = std::chrono::steady_clock::now();
  SuiteResult result;
  result.trials = trials;
  const auto& properties = registry();
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(seed, t);
    for (std::size_t k = 0; k < properties.size(); ++k) {
      const std::uint64_t check_seed = derive_seed(trial_seed, k);
      ++result.checks;
      try {
        const PropertyOutcome outcome = evaluate(properties[k].second, check_seed, max_dim);
        if (!(outcome.margin >= 0.0)) {
          result.failures.push_back(
              {properties[k].first, check_seed, outcome.digest, outcome.margin, std::nullopt});
        }
      } catch (const std::exception& e) {
        result.failures.push_back({properties[k].first, check_seed, "",
                                   std::numeric_limits<double>::quiet_NaN(), e.what()});
      }
    }
  }
  std::sort(result.failures.begin(), result.failures.end(),
            [](const SuiteFailure& a, const SuiteFailure& b) {
              return std::tie(a.seed, a.property) < std::tie(b.seed, b.property);
            });
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace rkdet
