#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "rkdet/cli.hpp"
#include "rkdet/errors.hpp"
#include "rkdet/generate.hpp"
#include "rkdet/io.hpp"
#include "rkdet/oracles.hpp"
#include "rkdet/suite.hpp"
#include "test_support.hpp"

namespace rkdet {
namespace {

namespace fs = std::filesystem;
using io::Json;
using namespace std::complex_literals;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("rkdet_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path file = path_ / name;
    std::ofstream(file) << text;
    return file.string();
  }

 private:
  fs::path path_;
};

TEST(Generate, PdAndPsdInstances) {
  GenSpec pd;
  pd.kind = GenKind::Pd;
  pd.n = 5;
  pd.seed = 4;
  const Matrix a = std::get<Matrix>(generate(pd));
  EXPECT_EQ(psd_check(a), Definiteness::PositiveDefinite);
  EXPECT_EQ(a, std::get<Matrix>(generate(pd)));
  pd.seed = 5;
  EXPECT_NE(a, std::get<Matrix>(generate(pd)));

  GenSpec psd;
  psd.kind = GenKind::Psd;
  psd.n = 4;
  psd.rank = 2;
  const Matrix b = std::get<Matrix>(generate(psd));
  EXPECT_TRUE(hermitian_check(b, 0.0));
  const auto eigenvalues = eigh(b).eigenvalues;
  const double cutoff = 1e-9 * (1.0 + b.frobenius_norm());
  std::size_t above = 0;
  for (double v : eigenvalues) above += v > cutoff ? 1 : 0;
  EXPECT_EQ(above, 2u);
}

TEST(Generate, BlockAndFixtureInstances) {
  GenSpec block;
  block.kind = GenKind::PdBlock;
  block.n = 5;
  block.partition = BlockPartition({2, 3});
  const BlockMatrix b = std::get<BlockMatrix>(generate(block));
  EXPECT_EQ(b.partition(), BlockPartition({2, 3}));
  EXPECT_EQ(b.dimension(), 5u);
  block.partition.reset();
  EXPECT_THROW(generate(block), ConfigurationError);

  GenSpec fixture;
  fixture.kind = GenKind::EqualityFixture;
  fixture.fixture = FixtureSpec{};
  fixture.fixture->kind = FixtureKind::ArrowPair;
  fixture.fixture->blocks = 3;
  EXPECT_EQ(std::get<BlockFamily>(generate(fixture)).size(), 2u);
  fixture.fixture.reset();
  EXPECT_THROW(generate(fixture), ConfigurationError);
}

TEST(RandomPartition, IsACompositionOfN) {
  Rng rng(91);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    EXPECT_EQ(random_partition(n, rng).dimension(), n);
  }
  EXPECT_THROW(random_partition(0, rng), DimensionError);
}

TEST(DeriveSeed, IsDeterministicAndSpreads) {
  EXPECT_EQ(derive_seed(42, 0), derive_seed(42, 0));
  EXPECT_NE(derive_seed(42, 0), derive_seed(42, 1));
  EXPECT_NE(derive_seed(42, 0), derive_seed(43, 0));
  Rng a(7);
  Rng b(7);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(a.next(), b.next());
}

TEST(Oracles, CofactorDeterminant) {
  EXPECT_EQ(oracle::cofactor_determinant(Matrix{{2, 1}, {1, 2}}), Complex(3.0));
  EXPECT_EQ(oracle::cofactor_determinant(Matrix{{0, 1i}, {1i, 0}}), Complex(1.0));
  EXPECT_EQ(oracle::cofactor_determinant(Matrix::identity(4)), Complex(1.0));
}

TEST(Oracles, LeastNormSquared) {
  const auto unique = oracle::least_norm_squared(Matrix{{1, 1}, {1, 2}}, Matrix::column({0, 1}));
  ASSERT_TRUE(unique.has_value());
  EXPECT_NEAR(*unique, 1.0, 1e-12);
  const auto dependent =
      oracle::least_norm_squared(Matrix{{1, 1}, {1, 1}}, Matrix::column({1, 1}));
  ASSERT_TRUE(dependent.has_value());
  EXPECT_NEAR(*dependent, 1.0, 1e-12);
  EXPECT_FALSE(oracle::least_norm_squared(Matrix{{1, 1}, {1, 1}}, Matrix::column({0, 1})));
}

TEST(Oracles, ElementaryEnumeration) {
  const oracle::ElementarySums sums = oracle::elementary_enumeration({{2, 2}, {2, 2}});
  EXPECT_DOUBLE_EQ(sums.lhs, 9.0);
  EXPECT_DOUBLE_EQ(sums.rhs, 7.0);
  const oracle::ElementarySums column = oracle::elementary_enumeration({{1, 2}, {1, 3}});
  EXPECT_DOUBLE_EQ(column.lhs, 6.0);
  EXPECT_DOUBLE_EQ(column.rhs, 6.0);
}

TEST(Io, MatrixRoundTrip) {
  const Matrix m{{1, 2.5 - 1i}, {2.5 + 1i, 0.125}};
  const io::MatrixFile plain = io::matrix_from_json(io::matrix_to_json(m));
  EXPECT_EQ(plain.matrix, m);
  EXPECT_FALSE(plain.partition.has_value());
  EXPECT_EQ(plain.as_block().partition(), BlockPartition::scalar(2));

  const BlockMatrix b(Matrix::identity(3), BlockPartition({1, 2}));
  const io::MatrixFile blocked = io::matrix_from_json(io::matrix_to_json(b));
  EXPECT_EQ(blocked.partition, BlockPartition({1, 2}));

  const Json real = Json::parse(R"({"rows": 1, "cols": 2, "entries": [[3, [1, -2]]]})");
  EXPECT_EQ(io::matrix_from_json(real).matrix, (Matrix{{3, 1.0 - 2i}}));

  Rng rng(92);
  const Matrix r = random_pd(4, rng);
  EXPECT_EQ(io::matrix_from_json(Json::parse(io::dump(io::matrix_to_json(r)))).matrix, r);
}

TEST(Io, FamilyRoundTrip) {
  Rng rng(93);
  const std::vector<std::size_t> t{2, 1};
  const BlockFamily family = random_pd_family(2, t, rng);
  const BlockFamily back = io::family_from_json(io::family_to_json(family));
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t p = 0; p < 2; ++p) {
    EXPECT_EQ(back[p].data(), family[p].data());
    EXPECT_EQ(back[p].partition(), family[p].partition());
  }
}

TEST(Io, RejectsMalformedInput) {
  EXPECT_THROW(io::matrix_from_json(Json::parse(R"({"rows": 2, "cols": 2})")), FormatError);
  EXPECT_THROW(io::matrix_from_json(Json::parse(R"({"rows": 1, "cols": 2, "entries": [[1]]})")),
               FormatError);
  EXPECT_THROW(io::matrix_from_json(Json::parse(R"({"rows": 1, "cols": 1, "entries": [["x"]]})")),
               FormatError);
  EXPECT_THROW(io::read_json_file("/nonexistent/rkdet.json"), FormatError);
  TempDir dir;
  EXPECT_THROW(io::read_json_file(dir.write("bad.json", "{not json")), FormatError);
}

TEST(Io, ReportSerialization) {
  InequalityReport r = make_report("fischer", 4.0, 3.0, 1e-9);
  const Json j = io::report_to_json(r);
  EXPECT_EQ(j["name"], "fischer");
  EXPECT_EQ(j["lhs"], 4.0);
  EXPECT_EQ(j["holds"], true);
  EXPECT_TRUE(j["equality_case"].is_null());
}

TEST(Suite, SmallRunPassesAndIsReproducible) {
  const SuiteResult first = run_suite(20, 42, 5);
  EXPECT_TRUE(first.passed());
  EXPECT_EQ(first.trials, 20u);
  EXPECT_EQ(first.checks, 20u * property_names().size());
  const SuiteResult second = run_suite(20, 42, 5);
  EXPECT_EQ(first.checks, second.checks);
  EXPECT_EQ(first.failures.size(), second.failures.size());
}

TEST(Suite, PropertiesReproduceFromSeed) {
  for (const auto& name : property_names()) {
    const PropertyOutcome a = run_property(name, 1234, 5);
    const PropertyOutcome b = run_property(name, 1234, 5);
    EXPECT_EQ(a.digest, b.digest) << name;
    EXPECT_EQ(a.margin, b.margin) << name;
    EXPECT_GE(a.margin, 0.0) << name;
  }
  EXPECT_THROW(run_property("no_such_property", 1, 4), ConfigurationError);
}

TEST(Cli, ScalarCheckReportsEquality) {
  TempDir dir;
  const std::string a = dir.write("a.json", R"({"rows": 2, "cols": 2, "entries": [[2, 1], [1, 2]]})");
  const std::string b = dir.write("b.json", R"({"rows": 2, "cols": 2, "entries": [[3, 1], [1, 3]]})");
  const CliRun run = run_cli({"check", "scalar", "--op", "oppenheim-schur", "--a", a, "--b", b});
  ASSERT_EQ(run.code, 0) << run.err;
  const Json j = Json::parse(run.out);
  EXPECT_NEAR(j["lhs"].get<double>(), 59.0, 1e-9);
  EXPECT_NEAR(j["rhs"].get<double>(), 59.0, 1e-9);
  EXPECT_EQ(j["equality"], true);
  EXPECT_EQ(j["equality_case"], "(c) single off-diagonal pair (1,2)");
}

TEST(Cli, LambdaAndInterp) {
  TempDir dir;
  const std::string g = dir.write("g.json", R"({"rows": 2, "cols": 2, "entries": [[1, 1], [1, 2]]})");
  const CliRun lambda = run_cli({"lambda", "--matrix", g});
  ASSERT_EQ(lambda.code, 0) << lambda.err;
  const Json l = Json::parse(lambda.out);
  EXPECT_NEAR(l["lambdas"][0].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(l["lambdas"][1].get<double>(), 1.0, 1e-12);

  const std::string d = dir.write("d.json", "[[0, 0], [1, 0]]");
  const CliRun interp = run_cli({"interp", "--matrix", g, "--data", d});
  ASSERT_EQ(interp.code, 0) << interp.err;
  const Json i = Json::parse(interp.out);
  EXPECT_EQ(i["feasible"], true);
  EXPECT_NEAR(i["norm"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, GenIsDeterministicAndFeedsChecks) {
  TempDir dir;
  const CliRun first = run_cli({"--seed", "17", "gen", "--kind", "equality_fixture", "--fixture",
                                "arrow_pair", "--blocks", "4", "--pair", "1", "3"});
  ASSERT_EQ(first.code, 0) << first.err;
  const CliRun second = run_cli({"--seed", "17", "gen", "--kind", "equality_fixture", "--fixture",
                                 "arrow_pair", "--blocks", "4", "--pair", "1", "3"});
  EXPECT_EQ(first.out, second.out);

  const std::string family = dir.write("family.json", first.out);
  const CliRun check = run_cli({"--tol", "1e-7", "check", "block", "--family", family});
  ASSERT_EQ(check.code, 0) << check.err;
  EXPECT_EQ(Json::parse(check.out)["equality_case"], "(c) single off-diagonal pair (1,3)");
}

TEST(Cli, SuiteOutputIsStableApartFromTiming) {
  auto strip = [](const std::string& text) {
    Json j = Json::parse(text);
    j.erase("wall_time_s");
    return j.dump();
  };
  const CliRun a = run_cli({"--seed", "3", "suite", "--trials", "5", "--max-dim", "4"});
  const CliRun b = run_cli({"--seed", "3", "suite", "--trials", "5", "--max-dim", "4"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(strip(a.out), strip(b.out));
  EXPECT_EQ(Json::parse(a.out)["passed"], true);
}

TEST(Cli, UsageAndInputErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"bogus"}).code, 2);
  EXPECT_EQ(run_cli({"lambda"}).code, 2);
  EXPECT_EQ(run_cli({"lambda", "--matrix", "/nonexistent/m.json"}).code, 2);
  EXPECT_EQ(run_cli({"--tol", "-1", "suite"}).code, 2);

  TempDir dir;
  const std::string indefinite =
      dir.write("c.json", R"({"rows": 2, "cols": 2, "entries": [[1, 2], [2, 1]]})");
  const CliRun run = run_cli({"check", "scalar", "--op", "hadamard", "--a", indefinite});
  EXPECT_EQ(run.code, 2);
  EXPECT_TRUE(run.out.empty());
  EXPECT_NE(run.err.find("positive semidefinite"), std::string::npos);

  const std::string garbage = dir.write("x.json", "{");
  EXPECT_EQ(run_cli({"lambda", "--matrix", garbage}).code, 2);
}

}  // namespace
}  // namespace rkdet
