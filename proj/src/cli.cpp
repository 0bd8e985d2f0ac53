#include "rkdet/cli.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "rkdet/errors.hpp"
#include "rkdet/generate.hpp"
#include "rkdet/hadamard.hpp"
#include "rkdet/inequalities.hpp"
#include "rkdet/interpolation.hpp"
#include "rkdet/io.hpp"
#include "rkdet/suite.hpp"

namespace rkdet {

namespace {

using io::Json;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct Options {
  double tol = tol::kDefault;
  std::uint64_t seed = 0;

  std::string op;
  std::string a_path;
  std::string b_path;
  std::string family_path;
  std::size_t block = 1;

  std::string matrix_path;
  std::string data_path;
  std::optional<std::size_t> order;
  std::string factors_path;

  std::string kind = "pd";
  std::size_t n = 3;
  std::optional<std::size_t> rank;
  std::vector<std::size_t> partition;
  double epsilon = 1e-3;
  std::string fixture = "block_diagonal";
  std::size_t fixture_factors = 2;
  std::size_t fixture_blocks = 2;
  std::vector<std::size_t> block_sizes;
  std::vector<std::size_t> pair{1, 2};
  std::size_t anchor = 1;

  std::size_t trials = 100;
  std::size_t max_dim = 6;
};

struct Outcome {
  Json document;
  int code;
};

Json columns_json(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t k = 0; k < m.rows(); ++k) out.push_back(Json::array({m[k].real(), m[k].imag()}));
  return out;
}

Matrix read_matrix(const std::string& path) {
  return io::matrix_from_json(io::read_json_file(path)).matrix;
}

RealGrid read_grid(const std::string& path) {
  const Matrix m = read_matrix(path);
  RealGrid grid(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c).imag() != 0.0) throw FormatError("elementary grid entries must be real");
      grid[r][c] = m(r, c).real();
    }
  }
  return grid;
}

int verdict(const InequalityReport& r) { return r.holds ? kOk : kViolation; }

Outcome check_scalar(const Options& o) {
  if (o.op == "elementary") {
    const InequalityReport r = elementary_inequality(read_grid(o.a_path), o.tol);
    return {io::report_to_json(r), verdict(r)};
  }
  const Matrix a = read_matrix(o.a_path);
  if (o.op == "hadamard") {
    const InequalityReport r = hadamard_inequality(a, o.tol);
    return {io::report_to_json(r), verdict(r)};
  }
  if (o.op == "fischer") {
    const io::MatrixFile file = io::matrix_from_json(io::read_json_file(o.a_path));
    const InequalityReport r = fischer(file.as_block(), o.tol);
    return {io::report_to_json(r), verdict(r)};
  }
  if (o.b_path.empty()) throw ConfigurationError("--b is required for --op " + o.op);
  const Matrix b = read_matrix(o.b_path);
  const InequalityReport r = o.op == "oppenheim" ? oppenheim(a, b, o.tol)
                                                 : oppenheim_schur(a, b, o.tol);
  return {io::report_to_json(r), verdict(r)};
}

Outcome check_block(const Options& o) {
  const BlockFamily family = io::family_from_json(io::read_json_file(o.family_path));
  const InequalityReport r = block_oppenheim_schur(family, o.tol);
  Json doc = io::report_to_json(r);
  if (family.all_positive_definite()) {
    const OppenheimSchurChain chain = oppenheim_schur_chain(family);
    doc["chain"] = {{"determinant", chain.determinant},
                    {"ratio_lhs", chain.ratio_lhs},
                    {"ratio_rhs", chain.ratio_rhs},
                    {"chained", chain.chained},
                    {"final_rhs", chain.final_rhs}};
  }
  return {doc, verdict(r)};
}

Outcome check_ratio(const Options& o) {
  const BlockFamily family = io::family_from_json(io::read_json_file(o.family_path));
  const InequalityReport r = block_ratio_inequality(family, o.block, o.tol);
  Json doc = io::report_to_json(r);
  doc["block"] = o.block;
  return {doc, verdict(r)};
}

Outcome interp(const Options& o) {
  const Matrix gram = read_matrix(o.matrix_path);
  IpipProblem problem{gram, Matrix(1, 1), std::nullopt};
  if (o.order) {
    problem = IpipProblem::canonical(gram, *o.order);
  } else if (!o.data_path.empty()) {
    problem.data = io::column_from_json(io::read_json_file(o.data_path));
  } else {
    throw ConfigurationError("interp needs --data or --order");
  }
  const IpipSolution sol = solve_ipip(problem);
  Json doc;
  doc["feasible"] = sol.feasible;
  doc["norm"] = sol.feasible ? Json(sol.norm) : Json(nullptr);
  doc["norm_squared"] = sol.feasible ? Json(sol.norm * sol.norm) : Json(nullptr);
  doc["coefficients"] = sol.coefficients ? columns_json(*sol.coefficients) : Json(nullptr);
  if (psd_check(problem.gram) == Definiteness::PositiveDefinite) {
    doc["bordered_norm_squared"] = min_norm_bordered(problem.gram, problem.data);
  } else {
    doc["bordered_norm_squared"] = nullptr;
  }
  return {doc, kOk};
}

Outcome lambda(const Options& o) {
  const Matrix gram = read_matrix(o.matrix_path);
  Json doc;
  doc["lambdas"] = lambda_sequence(gram);
  doc["ipip_lambdas"] = ipip_lambdas(gram);
  return {doc, kOk};
}

Outcome extremal(const Options& o) {
  const BlockFamily family = io::family_from_json(io::read_json_file(o.family_path));
  const Json factors_doc = io::read_json_file(o.factors_path);
  if (!factors_doc.is_object() || !factors_doc.contains("factors") ||
      !factors_doc.at("factors").is_array()) {
    throw FormatError("factor file must be an object with a \"factors\" array");
  }
  std::vector<Matrix> factors;
  for (const auto& f : factors_doc.at("factors")) factors.push_back(io::column_from_json(f));
  const RestrictionCheck norms = restriction_inequality_check(family, simple_tensor(factors));
  const ExtremalCheck structural = extremal_simple_tensor_check(family, factors);
  Json doc;
  doc["tensor_norm"] = norms.tensor_norm;
  doc["pullback_norm"] = norms.pullback_norm;
  doc["holds"] = norms.holds;
  doc["extremal_by_norm"] = norms.extremal;
  doc["extremal_by_structure"] = structural.extremal;
  doc["witness_block"] = structural.witness_block ? Json(*structural.witness_block) : Json(nullptr);
  doc["agree"] = norms.extremal == structural.extremal;
  return {doc, norms.holds && doc["agree"].get<bool>() ? kOk : kViolation};
}

Outcome gen(const Options& o) {
  static const std::map<std::string, GenKind> kinds = {{"psd", GenKind::Psd},
                                                       {"pd", GenKind::Pd},
                                                       {"pd_block", GenKind::PdBlock},
                                                       {"equality_fixture",
                                                        GenKind::EqualityFixture}};
  static const std::map<std::string, FixtureKind> fixtures = {
      {"block_diagonal", FixtureKind::BlockDiagonal},
      {"arrow_pair", FixtureKind::ArrowPair},
      {"schur_complement_chain", FixtureKind::SchurComplementChain}};

  GenSpec spec;
  spec.kind = kinds.at(o.kind);
  spec.n = o.n;
  spec.rank = o.rank;
  spec.seed = o.seed;
  spec.epsilon = o.epsilon;
  if (!o.partition.empty()) spec.partition = BlockPartition(o.partition);
  if (spec.kind == GenKind::EqualityFixture) {
    if (o.pair.size() != 2) throw ConfigurationError("--pair takes exactly two block indices");
    FixtureSpec f;
    f.kind = fixtures.at(o.fixture);
    f.factors = o.fixture_factors;
    f.blocks = o.fixture_blocks;
    f.block_size = o.block_sizes;
    f.pair_i = o.pair[0];
    f.pair_j = o.pair[1];
    f.chain_anchor = o.anchor;
    f.epsilon = o.epsilon;
    spec.fixture = f;
  }

  const Generated g = generate(spec);
  Json doc;
  if (const auto* m = std::get_if<Matrix>(&g)) doc = io::matrix_to_json(*m);
  if (const auto* b = std::get_if<BlockMatrix>(&g)) doc = io::matrix_to_json(*b);
  if (const auto* f = std::get_if<BlockFamily>(&g)) doc = io::family_to_json(*f);
  return {doc, kOk};
}

Outcome suite(const Options& o) {
  const SuiteResult r = run_suite(o.trials, o.seed, o.max_dim);
  Json failures = Json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"property", f.property},
                        {"seed", f.seed},
                        {"digest", f.digest},
                        {"margin", f.margin},
                        {"error", f.error ? Json(*f.error) : Json(nullptr)}});
  }
  Json doc;
  doc["trials"] = r.trials;
  doc["checks"] = r.checks;
  doc["seed"] = o.seed;
  doc["max_dim"] = o.max_dim;
  doc["passed"] = r.passed();
  doc["failures"] = std::move(failures);
  doc["wall_time_s"] = r.wall_time_s;
  return {doc, r.passed() ? kOk : kViolation};
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Determinant inequalities for Hadamard products of block matrices", "rkdet"};
  app.require_subcommand(1);
  app.add_option("--tol", o.tol, "Relative tolerance")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();

  auto* check = app.add_subcommand("check", "Evaluate a determinant inequality");
  check->require_subcommand(1);
  check->fallthrough();
  auto* scalar = check->add_subcommand("scalar", "Scalar inequalities");
  scalar->fallthrough();
  scalar->add_option("--op", o.op, "Inequality")
      ->required()
      ->check(CLI::IsMember({"hadamard", "oppenheim", "oppenheim-schur", "fischer", "elementary"}));
  scalar->add_option("--a", o.a_path, "First matrix file")->required()->check(CLI::ExistingFile);
  scalar->add_option("--b", o.b_path, "Second matrix file")->check(CLI::ExistingFile);
  auto* block = check->add_subcommand("block", "Block Oppenheim-Schur inequality");
  block->fallthrough();
  block->add_option("--family", o.family_path, "Family file")->required()->check(CLI::ExistingFile);
  auto* ratio = check->add_subcommand("ratio", "Per-block ratio inequality");
  ratio->fallthrough();
  ratio->add_option("--i", o.block, "Block index (1-based)")->required();
  ratio->add_option("--family", o.family_path, "Family file")->required()->check(CLI::ExistingFile);

  auto* interp_cmd = app.add_subcommand("interp", "Solve an inner-product interpolation problem");
  interp_cmd->fallthrough();
  interp_cmd->add_option("--matrix", o.matrix_path, "Gram matrix file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* data_opt = interp_cmd->add_option("--data", o.data_path, "Data vector file")
                       ->check(CLI::ExistingFile);
  interp_cmd->add_option("--order", o.order, "Canonical order")->excludes(data_opt);

  auto* lambda_cmd = app.add_subcommand("lambda", "Lambda sequence of a Gram matrix");
  lambda_cmd->fallthrough();
  lambda_cmd->add_option("--matrix", o.matrix_path, "Gram matrix file")
      ->required()
      ->check(CLI::ExistingFile);

  auto* extremal_cmd = app.add_subcommand("extremal", "Restriction and extremality checks");
  extremal_cmd->fallthrough();
  extremal_cmd->add_option("--family", o.family_path, "Family file")
      ->required()
      ->check(CLI::ExistingFile);
  extremal_cmd->add_option("--factors", o.factors_path, "Simple tensor factors file")
      ->required()
      ->check(CLI::ExistingFile);

  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->fallthrough();
  gen_cmd->add_option("--kind", o.kind)
      ->check(CLI::IsMember({"psd", "pd", "pd_block", "equality_fixture"}))
      ->capture_default_str();
  gen_cmd->add_option("--n", o.n)->capture_default_str();
  gen_cmd->add_option("--rank", o.rank);
  gen_cmd->add_option("--partition", o.partition)->delimiter(',');
  gen_cmd->add_option("--epsilon", o.epsilon)->capture_default_str();
  gen_cmd->add_option("--fixture", o.fixture)
      ->check(CLI::IsMember({"block_diagonal", "arrow_pair", "schur_complement_chain"}))
      ->capture_default_str();
  gen_cmd->add_option("--factors", o.fixture_factors)->capture_default_str();
  gen_cmd->add_option("--blocks", o.fixture_blocks)->capture_default_str();
  gen_cmd->add_option("--block-size", o.block_sizes)->delimiter(',');
  gen_cmd->add_option("--pair", o.pair)->delimiter(',');
  gen_cmd->add_option("--anchor", o.anchor)->capture_default_str();

  auto* suite_cmd = app.add_subcommand("suite", "Run the randomized property suite");
  suite_cmd->fallthrough();
  suite_cmd->add_option("--trials", o.trials)->check(CLI::PositiveNumber)->capture_default_str();
  suite_cmd->add_option("--max-dim", o.max_dim)->check(CLI::PositiveNumber)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    Outcome result{};
    if (scalar->parsed()) result = check_scalar(o);
    else if (block->parsed()) result = check_block(o);
    else if (ratio->parsed()) result = check_ratio(o);
    else if (interp_cmd->parsed()) result = interp(o);
    else if (lambda_cmd->parsed()) result = lambda(o);
    else if (extremal_cmd->parsed()) result = extremal(o);
    else if (gen_cmd->parsed()) result = gen(o);
    else if (suite_cmd->parsed()) result = suite(o);
    out << io::dump(result.document) << '\n';
    return result.code;
  } catch (const Error& e) {
    err << "rkdet: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "rkdet: " << e.what() << '\n';
    return kUsage;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace rkdet
