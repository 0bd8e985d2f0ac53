#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rkdet/cli.hpp"
#include "rkdet/errors.hpp"
#include "rkdet/generate.hpp"
#include "rkdet/hadamard.hpp"
#include "rkdet/inequalities.hpp"
#include "rkdet/interpolation.hpp"
#include "rkdet/rkhs.hpp"
#include "rkdet/suite.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

using rkdet::BlockFamily;
using rkdet::BlockMatrix;
using rkdet::BlockPartition;
using rkdet::Complex;
using rkdet::Matrix;
using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;
using Sizes = std::vector<std::size_t>;

// 1-D input is read as a column vector.
Matrix to_matrix(const ComplexArray& a) {
  if (a.ndim() == 1) {
    return Matrix(static_cast<std::size_t>(a.shape(0)), 1,
                  std::vector<Complex>(a.data(), a.data() + a.size()));
  }
  if (a.ndim() != 2) throw rkdet::DimensionError("expected a 1-D or 2-D array");
  return Matrix(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                std::vector<Complex>(a.data(), a.data() + a.size()));
}

ComplexArray to_array(const Matrix& m) {
  ComplexArray out({m.rows(), m.cols()});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

ComplexArray to_vector(const Matrix& m) {
  ComplexArray out(static_cast<py::ssize_t>(m.rows() * m.cols()));
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

BlockPartition partition_for(const Matrix& m, const std::optional<Sizes>& sizes) {
  return sizes ? BlockPartition(*sizes) : BlockPartition::scalar(m.rows());
}

BlockMatrix to_block(const ComplexArray& a, const std::optional<Sizes>& sizes) {
  const Matrix m = to_matrix(a);
  return BlockMatrix(m, partition_for(m, sizes));
}

// A family is a sequence of (matrix, block sizes) pairs.
BlockFamily to_family(const std::vector<std::pair<ComplexArray, Sizes>>& factors) {
  std::vector<BlockMatrix> blocks;
  for (const auto& [a, sizes] : factors) blocks.push_back(to_block(a, sizes));
  return BlockFamily(std::move(blocks));
}

py::list from_family(const BlockFamily& family) {
  py::list out;
  for (const auto& a : family.factors()) {
    Sizes sizes;
    for (std::size_t i = 1; i <= a.block_count(); ++i) sizes.push_back(a.partition().size(i));
    out.append(py::make_tuple(to_array(a.data()), sizes));
  }
  return out;
}

std::vector<Matrix> to_columns(const std::vector<ComplexArray>& arrays) {
  std::vector<Matrix> out;
  for (const auto& a : arrays) out.push_back(to_matrix(a));
  return out;
}

py::object optional_vector(const std::optional<Matrix>& m) {
  return m ? py::object(to_vector(*m)) : py::object(py::none());
}

py::dict ipip_dict(const rkdet::IpipSolution& s) {
  return py::dict("feasible"_a = s.feasible, "norm"_a = s.norm,
                  "coefficients"_a = optional_vector(s.coefficients));
}

rkdet::FixtureKind fixture_kind(const std::string& name) {
  if (name == "block_diagonal") return rkdet::FixtureKind::BlockDiagonal;
  if (name == "arrow_pair") return rkdet::FixtureKind::ArrowPair;
  if (name == "schur_complement_chain") return rkdet::FixtureKind::SchurComplementChain;
  throw rkdet::ConfigurationError("unknown fixture kind '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Determinant inequalities for Hadamard products of positive block matrices";

  auto base = py::register_exception<rkdet::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<rkdet::DimensionError>(m, "DimensionError", base);
  py::register_exception<rkdet::PreconditionError>(m, "PreconditionError", base);
  py::register_exception<rkdet::IndexError>(m, "IndexError", base);
  py::register_exception<rkdet::OutOfRangeError>(m, "OutOfRangeError", base);
  py::register_exception<rkdet::ConfigurationError>(m, "ConfigurationError", base);
  py::register_exception<rkdet::RankError>(m, "RankError", base);
  py::register_exception<rkdet::GenerationError>(m, "GenerationError", base);
  py::register_exception<rkdet::FormatError>(m, "FormatError", base);

  py::class_<rkdet::InequalityReport>(m, "InequalityReport")
      .def_readonly("name", &rkdet::InequalityReport::name)
      .def_readonly("lhs", &rkdet::InequalityReport::lhs)
      .def_readonly("rhs", &rkdet::InequalityReport::rhs)
      .def_readonly("margin", &rkdet::InequalityReport::margin)
      .def_readonly("holds", &rkdet::InequalityReport::holds)
      .def_readonly("equality", &rkdet::InequalityReport::equality)
      .def_readonly("equality_case", &rkdet::InequalityReport::equality_case)
      .def_readonly("tol_used", &rkdet::InequalityReport::tol_used)
      .def_readonly("scale", &rkdet::InequalityReport::scale)
      .def("__repr__", [](const rkdet::InequalityReport& r) {
        std::ostringstream s;
        s << "InequalityReport(" << r.name << ", lhs=" << r.lhs << ", rhs=" << r.rhs
          << ", holds=" << (r.holds ? "True" : "False")
          << ", equality=" << (r.equality ? "True" : "False") << ")";
        return s.str();
      });

  // Linear algebra.
  m.def("determinant", [](const ComplexArray& a) { return rkdet::determinant(to_matrix(a)); }, "a"_a);
  m.def(
      "eigh",
      [](const ComplexArray& a) {
        const auto e = rkdet::eigh(to_matrix(a));
        return py::make_tuple(e.eigenvalues, to_array(e.eigenvectors));
      },
      "a"_a, "Eigenvalues in ascending order and orthonormal eigenvectors as columns.");
  m.def("pinv", [](const ComplexArray& a) { return to_array(rkdet::moore_penrose(to_matrix(a))); },
        "a"_a);
  m.def("kronecker",
        [](const ComplexArray& a, const ComplexArray& b) {
          return to_array(rkdet::kronecker(to_matrix(a), to_matrix(b)));
        },
        "a"_a, "b"_a);
  m.def("psd_check",
        [](const ComplexArray& a) { return std::string(rkdet::to_string(rkdet::psd_check(to_matrix(a)))); },
        "a"_a);

  // Reproducing kernel Hilbert spaces.
  m.def("rkhs_inner",
        [](const ComplexArray& kernel, const ComplexArray& f, const ComplexArray& g) {
          return rkdet::RkhsSpace(to_matrix(kernel)).inner(to_matrix(f), to_matrix(g));
        },
        "kernel"_a, "f"_a, "g"_a);
  m.def("rkhs_norm",
        [](const ComplexArray& kernel, const ComplexArray& f) {
          return rkdet::rkhs_norm(rkdet::RkhsSpace(to_matrix(kernel)), to_matrix(f));
        },
        "kernel"_a, "f"_a);
  m.def("rkhs_sum_check",
        [](const ComplexArray& a, const ComplexArray& b, const ComplexArray& f, const ComplexArray& g) {
          const auto s = rkdet::rkhs_sum_check(to_matrix(a), to_matrix(b), to_matrix(f), to_matrix(g));
          return py::dict("lhs"_a = s.lhs, "rhs"_a = s.rhs, "equality"_a = s.equality,
                          "witness"_a = optional_vector(s.witness));
        },
        "a"_a, "b"_a, "f"_a, "g"_a);

  // Interpolation.
  m.def("solve_ipip",
        [](const ComplexArray& gram, const ComplexArray& data) {
          return ipip_dict(rkdet::solve_ipip({to_matrix(gram), to_matrix(data), std::nullopt}));
        },
        "gram"_a, "data"_a);
  m.def("min_norm_bordered",
        [](const ComplexArray& gram, const ComplexArray& data) {
          return rkdet::min_norm_bordered(to_matrix(gram), to_matrix(data));
        },
        "gram"_a, "data"_a, "Squared minimum norm from the bordered determinant.");
  m.def("lambda_sequence",
        [](const ComplexArray& gram) { return rkdet::lambda_sequence(to_matrix(gram)); }, "gram"_a);
  m.def("lambda_det_identity_check",
        [](const ComplexArray& t) {
          const auto c = rkdet::lambda_det_identity_check(to_matrix(t));
          return py::dict("product"_a = c.product, "inv_sqrt_det"_a = c.inv_sqrt_det,
                          "agree"_a = c.agree);
        },
        "t"_a);
  m.def("block_lambda_products",
        [](const ComplexArray& t, const Sizes& partition) {
          const BlockMatrix b = to_block(t, partition);
          py::list out;
          for (const auto& e : rkdet::block_lambda_products(b, rkdet::block_eigenbases(b))) {
            out.append(py::dict("lambdas"_a = e.lambdas, "lambda_product"_a = e.lambda_product,
                                "minor_ratio"_a = e.minor_ratio));
          }
          return out;
        },
        "t"_a, "partition"_a);
  m.def("block_ipip_min_norm",
        [](const ComplexArray& a, const Sizes& partition, std::size_t i, std::size_t j) {
          const BlockMatrix b = to_block(a, partition);
          const auto r = rkdet::block_ipip_min_norm(b, rkdet::block_eigenbases(b), i, j);
          return py::dict("lambda"_a = r.lambda, "lower_bound"_a = r.lower_bound,
                          "equality"_a = r.equality,
                          "leading_components_vanish"_a = r.leading_components_vanish,
                          "function"_a = to_vector(r.function));
        },
        "a"_a, "partition"_a, "i"_a, "j"_a);

  // Hadamard products.
  m.def("khatri_rao",
        [](const std::vector<std::pair<ComplexArray, Sizes>>& family) {
          const BlockMatrix kr = rkdet::khatri_rao(to_family(family));
          Sizes sizes;
          for (std::size_t i = 1; i <= kr.block_count(); ++i) sizes.push_back(kr.partition().size(i));
          return py::make_tuple(to_array(kr.data()), sizes);
        },
        "family"_a);
  m.def("diagonal_pullback",
        [](const std::vector<std::pair<ComplexArray, Sizes>>& family,
           const std::vector<ComplexArray>& factors) {
          return to_vector(rkdet::diagonal_pullback(to_family(family), to_columns(factors)));
        },
        "family"_a, "factors"_a);
  m.def("restriction_inequality_check",
        [](const std::vector<std::pair<ComplexArray, Sizes>>& family,
           const std::vector<ComplexArray>& factors) {
          const BlockFamily f = to_family(family);
          const auto r = rkdet::restriction_inequality_check(f, rkdet::simple_tensor(to_columns(factors)));
          return py::dict("tensor_norm"_a = r.tensor_norm, "pullback_norm"_a = r.pullback_norm,
                          "holds"_a = r.holds, "extremal"_a = r.extremal);
        },
        "family"_a, "factors"_a, "Norm comparison for the simple tensor f_1 (x) ... (x) f_m.");
  m.def("extremal_simple_tensor_check",
        [](const std::vector<std::pair<ComplexArray, Sizes>>& family,
           const std::vector<ComplexArray>& factors) {
          const auto r = rkdet::extremal_simple_tensor_check(to_family(family), to_columns(factors));
          return py::dict("extremal"_a = r.extremal, "witness_block"_a = r.witness_block);
        },
        "family"_a, "factors"_a);
  m.def("theorem_main_min_norm",
        [](const std::vector<std::pair<ComplexArray, Sizes>>& family, std::size_t block,
           const Sizes& positions) {
          const BlockFamily f = to_family(family);
          const auto r = rkdet::theorem_main_min_norm(f, rkdet::family_eigenbases(f), {block, positions});
          return py::dict("lambda"_a = r.lambda, "upper_bound"_a = r.upper_bound, "holds"_a = r.holds,
                          "equality"_a = r.equality, "candidate_norm"_a = r.candidate_norm,
                          "candidate_residual"_a = r.candidate_residual,
                          "minimizer"_a = optional_vector(r.minimizer));
        },
        "family"_a, "block"_a, "positions"_a);

  // Determinant inequalities.
  m.def("elementary_inequality", &rkdet::elementary_inequality, "a"_a, "tol"_a = rkdet::tol::kDefault);
  m.def("hadamard_inequality",
        [](const ComplexArray& a, double tol) { return rkdet::hadamard_inequality(to_matrix(a), tol); },
        "a"_a, "tol"_a = rkdet::tol::kDefault);
  m.def("oppenheim",
        [](const ComplexArray& a, const ComplexArray& b, double tol) {
          return rkdet::oppenheim(to_matrix(a), to_matrix(b), tol);
        },
        "a"_a, "b"_a, "tol"_a = rkdet::tol::kDefault);
  m.def("oppenheim_schur",
        [](const ComplexArray& a, const ComplexArray& b, double tol) {
          return rkdet::oppenheim_schur(to_matrix(a), to_matrix(b), tol);
        },
        "a"_a, "b"_a, "tol"_a = rkdet::tol::kDefault);
  m.def("fischer",
        [](const ComplexArray& a, const Sizes& partition, double tol) {
          return rkdet::fischer(to_block(a, partition), tol);
        },
        "a"_a, "partition"_a, "tol"_a = rkdet::tol::kDefault);
  m.def("block_ratio_inequality",
        [](const std::vector<std::pair<ComplexArray, Sizes>>& family, std::size_t i, double tol) {
          return rkdet::block_ratio_inequality(to_family(family), i, tol);
        },
        "family"_a, "i"_a, "tol"_a = rkdet::tol::kDefault);
  m.def("block_oppenheim_schur",
        [](const std::vector<std::pair<ComplexArray, Sizes>>& family, double tol) {
          return rkdet::block_oppenheim_schur(to_family(family), tol);
        },
        "family"_a, "tol"_a = rkdet::tol::kDefault);

  // Instances and harness.
  m.def("random_pd",
        [](std::size_t n, std::uint64_t seed) {
          rkdet::Rng rng(seed);
          return to_array(rkdet::random_pd(n, rng));
        },
        "n"_a, "seed"_a = 0);
  m.def("random_psd",
        [](std::size_t n, std::size_t rank, std::uint64_t seed) {
          rkdet::Rng rng(seed);
          return to_array(rkdet::random_psd(n, rank, rng));
        },
        "n"_a, "rank"_a, "seed"_a = 0);
  m.def("equality_case_constructor",
        [](const std::string& kind, std::size_t factors, std::size_t blocks, const Sizes& block_size,
           std::pair<std::size_t, std::size_t> pair, std::size_t anchor, std::uint64_t seed) {
          rkdet::FixtureSpec spec;
          spec.kind = fixture_kind(kind);
          spec.factors = factors;
          spec.blocks = blocks;
          spec.block_size = block_size;
          spec.pair_i = pair.first;
          spec.pair_j = pair.second;
          spec.chain_anchor = anchor;
          spec.seed = seed;
          return from_family(rkdet::equality_case_constructor(spec));
        },
        "kind"_a, "factors"_a = 2, "blocks"_a = 2, "block_size"_a = Sizes{},
        "pair"_a = std::pair<std::size_t, std::size_t>{1, 2}, "anchor"_a = 1, "seed"_a = 0);
  m.def("run_suite",
        [](std::size_t trials, std::uint64_t seed, std::size_t max_dim) {
          const rkdet::SuiteResult r = rkdet::run_suite(trials, seed, max_dim);
          py::list failures;
          for (const auto& f : r.failures) {
            failures.append(py::dict("property"_a = f.property, "seed"_a = f.seed,
                                     "digest"_a = f.digest, "margin"_a = f.margin, "error"_a = f.error));
          }
          return py::dict("trials"_a = r.trials, "checks"_a = r.checks, "passed"_a = r.passed(),
                          "failures"_a = failures, "wall_time_s"_a = r.wall_time_s);
        },
        "trials"_a = 100, "seed"_a = 0, "max_dim"_a = 6);
  m.def("cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out;
          std::ostringstream err;
          const int code = rkdet::cli_main(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        "args"_a, "Runs the command-line interface; returns (exit code, stdout, stderr).");
}
