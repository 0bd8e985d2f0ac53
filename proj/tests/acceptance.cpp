// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "rkdet/generate.hpp"
#include "rkdet/inequalities.hpp"
#include "rkdet/interpolation.hpp"
#include "rkdet/io.hpp"
#include "rkdet/oracles.hpp"
#include "test_support.hpp"

#ifndef RKDET_CLI_PATH
#error "RKDET_CLI_PATH must name the rkdet executable"
#endif

namespace rkdet {
namespace {

using testing::gaussian;
using testing::relative_error;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit_s;  // 0 means no runtime bound
  std::function<Outcome()> run;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, pattern, a, b, c);
  return buffer;
}

std::uint64_t seed_for(int criterion) { return derive_seed(20261016, criterion); }

BlockFamily corpus_family(Rng& rng) {
  const std::size_t m = 2 + rng.below(2);
  const std::size_t s = 2 + rng.below(2);
  std::vector<std::size_t> t;
  for (std::size_t p = 0; p < m; ++p) t.push_back(1 + rng.below(2));
  return random_pd_family(s, t, rng);
}

Outcome lambda_det() {
  Rng rng(seed_for(1));
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix t = random_pd(2 + rng.below(7), rng);
    const LambdaDetCheck c = lambda_det_identity_check(t);
    worst = std::max(worst, std::abs(c.product * c.product * determinant_ldl(t) - 1.0));
  }
  return {worst <= 1e-7, fmt("max |prod lambda^2 det T - 1| = %.2e over 200 matrices", worst)};
}

Outcome bordered() {
  Rng rng(seed_for(2));
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const Matrix g = random_pd(n, rng);
    const Matrix b = gaussian(n, 1, rng);
    const IpipSolution direct = solve_ipip({g, b, {}});
    worst = std::max(worst, relative_error(min_norm_bordered(g, b), direct.norm * direct.norm));
  }
  return {worst <= 1e-8, fmt("max relative gap = %.2e over 200 Grams", worst)};
}

Outcome block_lambda() {
  Rng rng(seed_for(3));
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    const BlockMatrix t(random_pd(n, rng), random_partition(n, rng));
    for (const auto& entry : block_lambda_products(t, block_eigenbases(t)))
      worst = std::max(worst, relative_error(entry.lambda_product, entry.minor_ratio));
  }
  return {worst <= 1e-7, fmt("max relative gap = %.2e over 100 block matrices", worst)};
}

Outcome lemma_bound() {
  Rng rng(seed_for(4));
  double worst = 0.0;
  int instances = 0;
  while (instances < 200) {
    const std::size_t n = 2 + rng.below(7);
    const BlockMatrix a(random_pd(n, rng), random_partition(n, rng));
    const auto bases = block_eigenbases(a);
    const std::size_t i = 1 + rng.below(a.block_count());
    const std::size_t j = 1 + rng.below(a.partition().size(i));
    const BlockIpipResult r = block_ipip_min_norm(a, bases, i, j);
    worst = std::min(worst, r.lambda - r.lower_bound);
    ++instances;
  }
  int fixtures = 0;
  int detected = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t s = 2 + rng.below(3);
    std::vector<Matrix> blocks;
    std::vector<std::size_t> sizes;
    for (std::size_t k = 0; k < s; ++k) {
      sizes.push_back(1 + rng.below(3));
      blocks.push_back(random_pd(sizes.back(), rng));
    }
    const BlockMatrix a(block_diagonal(blocks), BlockPartition(sizes));
    const auto bases = block_eigenbases(a);
    for (std::size_t i = 1; i <= s; ++i) {
      for (std::size_t j = 1; j <= sizes[i - 1]; ++j) {
        ++fixtures;
        detected += block_ipip_min_norm(a, bases, i, j).equality ? 1 : 0;
      }
    }
  }
  const bool pass = worst >= -1e-10 && detected == fixtures;
  return {pass, fmt("min lambda - bound = %.2e over 200; equality on %.0f/%.0f block-diagonal indices",
                    worst, detected, fixtures)};
}

Outcome elementary() {
  Rng rng(seed_for(5));
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const std::size_t m = 1 + (trial / 3) % 3;
    RealGrid a(n, std::vector<double>(m));
    for (auto& row : a)
      for (double& v : row) v = rng.uniform(1.0, 4.0);
    const InequalityReport r = elementary_inequality(a);
    const oracle::ElementarySums sums = oracle::elementary_enumeration(a);
    worst = std::max({worst, relative_error(r.lhs, sums.lhs), relative_error(r.rhs, sums.rhs)});
  }

  int correct = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.below(2);
    const std::size_t m = 2 + rng.below(2);
    auto grid = [&](std::size_t rows, std::size_t cols) {
      RealGrid a(rows, std::vector<double>(cols));
      for (auto& row : a)
        for (double& v : row) v = rng.uniform(1.5, 4.0);
      return a;
    };
    const InequalityReport one = elementary_inequality(rng.below(2) ? grid(1, m) : grid(n, 1));
    correct += one.equality && one.equality_case == "(i) m=1 or n=1";

    RealGrid column = grid(n, m);
    const std::size_t j = rng.below(m);
    for (auto& row : column) row[j] = 1.0;
    const InequalityReport two = elementary_inequality(column);
    correct += two.equality && two.equality_case == "(ii) all-ones column";

    RealGrid rows = grid(n, m);
    const std::size_t keep = rng.below(n);
    for (std::size_t i = 0; i < n; ++i)
      if (i != keep) rows[i].assign(m, 1.0);
    const InequalityReport three = elementary_inequality(rows);
    correct += three.equality && three.equality_case == "(iii) all-ones off rows";
  }
  return {worst <= 1e-9 && correct == 90,
          fmt("max oracle gap = %.2e over 500 grids; %.0f/90 equality fixtures classified", worst,
              correct)};
}

Outcome scalar_oppenheim_schur() {
  Rng rng(seed_for(6));
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    const Matrix a = random_psd(n, 1 + rng.below(n), rng);
    const Matrix b = random_psd(n, 1 + rng.below(n), rng);
    const InequalityReport r = oppenheim_schur(a, b, 1e-9);
    worst = std::min(worst, r.margin / r.scale);
  }
  int equal = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix a = random_pd(2, rng);
    const Matrix b = random_pd(2, rng);
    equal += oppenheim_schur(a, b, 1e-9).equality ? 1 : 0;
  }
  const Matrix three{{2, 1, 1}, {1, 2, 1}, {1, 1, 2}};
  const InequalityReport fixture = oppenheim_schur(three, three, 1e-9);
  const bool exact = std::abs(fixture.lhs - 70.0) <= 1e-9 && std::abs(fixture.rhs - 64.0) <= 1e-9;
  return {worst >= -1e-9 && equal == 200 && exact,
          fmt("min margin/scale = %.2e over 1000 PSD pairs; 2x2 equality %.0f/200; ", worst, equal) +
              fmt("3x3 fixture lhs %.12g rhs %.12g", fixture.lhs, fixture.rhs)};
}

Outcome block_oppenheim_schur_criterion() {
  Rng rng(seed_for(7));
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const InequalityReport r = block_oppenheim_schur(corpus_family(rng), 1e-7);
    worst = std::min(worst, r.margin / r.scale);
  }

  int fixtures = 0;
  int detected = 0;
  auto expect = [&](const BlockFamily& family, const std::string& prefix) {
    const InequalityReport r = block_oppenheim_schur(family, 1e-7);
    ++fixtures;
    detected += r.equality && r.equality_case && r.equality_case->rfind(prefix, 0) == 0;
  };
  for (std::uint64_t k = 0; k < 30; ++k) {
    std::vector<std::size_t> one_block{1 + rng.below(2), 1 + rng.below(2)};
    expect(random_pd_family(1, one_block, rng), "(a)");

    FixtureSpec diag;
    diag.kind = FixtureKind::BlockDiagonal;
    diag.factors = 2 + k % 2;
    diag.blocks = 2 + k % 3;
    diag.block_size.assign(diag.factors, 1 + k % 2);
    diag.seed = derive_seed(seed_for(7), k);
    expect(equality_case_constructor(diag), "(b)");

    FixtureSpec arrow;
    arrow.kind = FixtureKind::ArrowPair;
    arrow.factors = 2 + k % 2;
    arrow.blocks = 3 + k % 3;
    arrow.pair_i = 1 + k % 2;
    arrow.pair_j = arrow.blocks;
    arrow.seed = derive_seed(seed_for(7), 100 + k);
    expect(equality_case_constructor(arrow), "(c)");
  }

  double path_gap = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    const Matrix a = random_pd(n, rng);
    const Matrix b = random_pd(n, rng);
    const BlockFamily pair({BlockMatrix(a, BlockPartition::scalar(n)),
                            BlockMatrix(b, BlockPartition::scalar(n))});
    const InequalityReport block = block_oppenheim_schur(pair, 1e-9);
    const InequalityReport scalar = oppenheim_schur(a, b, 1e-9);
    path_gap = std::max(path_gap, std::abs(block.margin - scalar.margin) / scalar.scale);
  }
  return {worst >= -1e-7 && detected == fixtures && path_gap <= 1e-12,
          fmt("min margin/scale = %.2e over 300 families; fixtures %.0f/%.0f; ", worst, detected,
              fixtures) +
              fmt("scalar-path margin gap %.2e", path_gap)};
}

Outcome ratio_criterion() {
  Rng rng(seed_for(7));
  int violations = 0;
  int first_block_misses = 0;
  int fischer_failures = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const BlockFamily family = corpus_family(rng);
    for (std::size_t i = 1; i <= family.block_count(); ++i) {
      const InequalityReport r = block_ratio_inequality(family, i, 1e-7);
      violations += r.holds ? 0 : 1;
      if (i == 1) first_block_misses += r.equality && r.equality_case == "(a) i=1" ? 0 : 1;
    }
    std::vector<BlockMatrix> chained = family.factors();
    chained.push_back(khatri_rao(family));
    for (const auto& a : chained) {
      const auto ratios = block_determinant_ratios(a);
      double product = 1.0;
      double diagonal = 1.0;
      bool bounded = true;
      for (std::size_t i = 1; i <= a.block_count(); ++i) {
        const double d = determinant_ldl(a.block(i, i));
        product *= ratios[i - 1];
        diagonal *= d;
        bounded = bounded && ratios[i - 1] <= d * (1.0 + 1e-9);
      }
      const double det = determinant_ldl(a.data());
      const bool ok = bounded && relative_error(product, det) <= 1e-9 &&
                      diagonal >= product * (1.0 - 1e-9) && fischer(a, 1e-9).holds;
      fischer_failures += ok ? 0 : 1;
    }
  }
  return {violations == 0 && first_block_misses == 0 && fischer_failures == 0,
          fmt("violations %.0f; i=1 not case (a) %.0f; Fischer chain failures %.0f", violations,
              first_block_misses, fischer_failures)};
}

Outcome restriction_criterion() {
  Rng rng(seed_for(9));
  int disagreements = 0;
  int extremal = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng.below(2);
    const std::size_t s = 2 + rng.below(2);
    std::vector<std::size_t> t;
    // Factor dimensions stay <= 6; three-factor tensors use scalar blocks.
    const std::size_t max_t = m == 3 ? 1 : (s == 2 ? 3 : 2);
    for (std::size_t p = 0; p < m; ++p) t.push_back(1 + rng.below(max_t));
    const BlockFamily family = random_pd_family(s, t, rng);
    const bool aligned = trial % 2 == 0;
    const std::size_t i = 1 + rng.below(s);
    std::vector<Matrix> factors;
    for (const auto& a : family.factors()) {
      Matrix x = gaussian(a.dimension(), 1, rng);
      if (aligned) {
        Matrix segment(a.dimension(), 1);
        segment.set_block(a.partition().offset(i), 0,
                          x.block(a.partition().offset(i), 0, a.partition().size(i), 1));
        x = segment;
      }
      factors.push_back(a.data() * x);
    }
    const ExtremalCheck structural = extremal_simple_tensor_check(family, factors);
    const RestrictionCheck norms = restriction_inequality_check(family, simple_tensor(factors));
    disagreements += (structural.extremal != norms.extremal || !norms.holds) ? 1 : 0;
    extremal += structural.extremal ? 1 : 0;
  }
  return {disagreements == 0,
          fmt("disagreements %.0f over 200 simple tensors (%.0f extremal)", disagreements, extremal)};
}

Outcome main_bound_criterion() {
  Rng rng(seed_for(10));
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const BlockFamily family = corpus_family(rng);
    TensorIndex gamma{1 + rng.below(family.block_count()), {}};
    for (const auto& a : family.factors())
      gamma.positions.push_back(1 + rng.below(a.partition().size(gamma.block)));
    const MainBoundResult r = theorem_main_min_norm(family, family_eigenbases(family), gamma);
    worst = std::min(worst, (r.upper_bound - r.lambda) / (1.0 + r.upper_bound));
  }

  int fixtures = 0;
  int verified = 0;
  auto verify = [&](const BlockFamily& family, const TensorIndex& gamma) {
    const MainBoundResult r = theorem_main_min_norm(family, family_eigenbases(family), gamma);
    ++fixtures;
    verified += r.equality && r.minimizer && r.candidate_residual <= 1e-7 &&
                std::abs(r.candidate_norm - r.lambda) <= 1e-7;
  };
  for (std::uint64_t k = 0; k < 20; ++k) {
    const BlockFamily random = corpus_family(rng);
    verify(random, {1, std::vector<std::size_t>(random.size(), 1)});

    std::vector<BlockMatrix> factors;
    const std::size_t s = 2 + k % 2;
    for (std::size_t p = 0; p < 2; ++p) {
      const std::size_t t = 1 + (k + p) % 2;
      std::vector<Matrix> blocks;
      for (std::size_t i = 0; i < s; ++i) blocks.push_back(random_pd(t, rng));
      factors.emplace_back(block_diagonal(blocks), BlockPartition::uniform(s, t));
    }
    const BlockFamily diagonal(factors);
    verify(diagonal, {s, {factors[0].partition().size(s), 1}});
  }
  return {worst >= -1e-7 && verified == fixtures,
          fmt("min (bound - lambda)/scale = %.2e over 100 families; minimizer verified %.0f/%.0f",
              worst, verified, fixtures)};
}

struct Process {
  int code;
  std::string out;
};

Process run(const std::string& args) {
  const std::string command = std::string(RKDET_CLI_PATH) + " " + args + " 2>/dev/null";
  Process p{-1, {}};
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return p;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) p.out.append(buffer, n);
  const int status = pclose(pipe);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

std::string without_timing(const std::string& text) {
  io::Json j = io::Json::parse(text, nullptr, false);
  if (j.is_discarded()) return text;
  if (j.is_object()) j.erase("wall_time_s");
  return j.dump();
}

Outcome cli_criterion() {
  const std::vector<std::string> invocations{
      "--seed 9 gen --kind pd --n 5",
      "--seed 9 gen --kind equality_fixture --fixture arrow_pair --blocks 4 --pair 1 3",
      "--seed 42 suite --trials 50 --max-dim 6",
  };
  int identical = 0;
  for (const auto& args : invocations) {
    const Process a = run(args);
    const Process b = run(args);
    identical += a.code == 0 && b.code == 0 && without_timing(a.out) == without_timing(b.out);
  }

  const auto start = std::chrono::steady_clock::now();
  const Process suite = run("--seed 42 suite --trials 500 --max-dim 6");
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = identical == static_cast<int>(invocations.size()) && suite.code == 0 && elapsed < 60.0;
  return {ok, fmt("%.0f/%.0f repeated invocations identical; ", identical,
                  static_cast<double>(invocations.size())) +
                  fmt("suite 500 trials exit %.0f in %.2f s", suite.code, elapsed)};
}

}  // namespace
}  // namespace rkdet

int main() {
  using namespace rkdet;
  const std::vector<Criterion> criteria{
      {1, "lambda-determinant identity", 5.0, lambda_det},
      {2, "bordered-determinant equivalence", 5.0, bordered},
      {3, "block lambda products", 0.0, block_lambda},
      {4, "block IPIP lower bound", 0.0, lemma_bound},
      {5, "elementary inequality", 0.0, elementary},
      {6, "scalar Oppenheim-Schur", 0.0, scalar_oppenheim_schur},
      {7, "block Oppenheim-Schur", 0.0, block_oppenheim_schur_criterion},
      {8, "per-block ratio inequality", 0.0, ratio_criterion},
      {9, "restriction inequality and extremality", 0.0, restriction_criterion},
      {10, "Hadamard-product IPIP bound", 0.0, main_bound_criterion},
      {11, "CLI determinism and suite", 0.0, cli_criterion},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0 && elapsed >= c.time_limit_s) {
      outcome.pass = false;
      outcome.detail += " [over time limit]";
    }
    failed += outcome.pass ? 0 : 1;
    std::printf("criterion %2d %s  %s: %s (%.2f s)\n", c.id, outcome.pass ? "PASS" : "FAIL",
                c.title.c_str(), outcome.detail.c_str(), elapsed);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
