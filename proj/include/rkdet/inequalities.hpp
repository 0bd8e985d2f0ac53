#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rkdet/hadamard.hpp"
#include "rkdet/linalg.hpp"
#include "rkdet/matrix.hpp"

namespace rkdet {

/// Verdict for one inequality of the form lhs >= rhs.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs
  bool holds = false;     // margin >= -tol_used * scale
  bool equality = false;  // |margin| <= tol_used * scale
  std::optional<std::string> equality_case;
  double tol_used = 0.0;
  double scale = 1.0;  // 1 + max(|lhs|, |rhs|)
};

InequalityReport make_report(std::string name, double lhs, double rhs, double tol);

/// sigma_p = prod_q t_q / t_p (uniform factors only, else empty) and
/// sigma_ip = prod_q n_iq / n_ip.
struct ExponentProfile {
  std::vector<std::uint64_t> sigma_p;
  std::vector<std::vector<std::uint64_t>> sigma_ip;  // [i-1][p]
};

ExponentProfile exponent_profile(const BlockFamily& family);

/// Row-major real grid a[i][j], i = 1..n, j = 1..m.
using RealGrid = std::vector<std::vector<double>>;

/// prod_i {prod_j a_ij - prod_j (a_ij - 1)} >= prod_j prod_i a_ij - prod_j (prod_i a_ij - 1)
/// for a_ij >= 1, with equality cases (i) m = 1 or n = 1, (ii) an all-ones
/// column, (iii) all rows but one are all ones.
InequalityReport elementary_inequality(const RealGrid& a, double tol = tol::kDefault);

/// prod a_ii >= det A.
InequalityReport hadamard_inequality(const Matrix& a, double tol = tol::kDefault);

/// det(A o B) >= det(A) prod b_ii.
InequalityReport oppenheim(const Matrix& a, const Matrix& b, double tol = tol::kDefault);

/// det(A o B) + det A det B >= det A prod b_ii + det B prod a_ii.
/// PD pairs are classified with the block theorem's cases on scalar partitions.
InequalityReport oppenheim_schur(const Matrix& a, const Matrix& b, double tol = tol::kDefault);

/// prod_i det A_ii >= det A.
InequalityReport fischer(const BlockMatrix& a, double tol = tol::kDefault);

/// det((X)_i) / det((X)_{i-1}) for i = 1..s.
std::vector<double> block_determinant_ratios(const BlockMatrix& x);

/// Per-block ratio inequality for the Khatri-Rao product at block i (1-based).
InequalityReport block_ratio_inequality(const BlockFamily& family, std::size_t i,
                                        double tol = tol::kDefault);

/// Block Oppenheim-Schur inequality for factors with uniform block sizes t_p.
InequalityReport block_oppenheim_schur(const BlockFamily& family, double tol = tol::kDefault);

/// The two-step bound behind the block Oppenheim-Schur inequality:
/// det(KR) = prod_i ratio_lhs[i] >= chained = prod_i ratio_rhs[i] >= final_rhs.
struct OppenheimSchurChain {
  double determinant;
  std::vector<double> ratio_lhs;
  std::vector<double> ratio_rhs;
  double chained;
  double final_rhs;
};

OppenheimSchurChain oppenheim_schur_chain(const BlockFamily& family);

enum class FixtureKind { BlockDiagonal, ArrowPair, SchurComplementChain };

const char* to_string(FixtureKind kind);

struct FixtureSpec {
  FixtureKind kind = FixtureKind::BlockDiagonal;
  std::size_t factors = 2;            // m
  std::size_t blocks = 2;             // s
  std::vector<std::size_t> block_size;  // t_p per factor; empty means all 1
  std::size_t pair_i = 1;             // arrow pair (i, j), 1-based
  std::size_t pair_j = 2;
  std::size_t chain_anchor = 1;       // i_0 for the Schur complement chain
  std::uint64_t seed = 0;
  double epsilon = 1e-3;
};

/// Families that satisfy a named equality case by construction:
///  - BlockDiagonal: the last factor is block diagonal (case (b));
///  - ArrowPair: scalar factors whose only off-diagonal entries sit at
///    (i, j) and (j, i) (case (c) of the block inequality);
///  - SchurComplementChain: scalar factors with A_ls = A_l,i0 A_i0,i0^{-1} A_i0,s
///    for all l < s (case (c) of the ratio inequality at i = s).
/// Throws GenerationError if a PD sample is not reached after bounded resampling.
BlockFamily equality_case_constructor(const FixtureSpec& spec);

}  // namespace rkdet
