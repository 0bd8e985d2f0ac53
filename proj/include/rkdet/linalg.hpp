#pragma once

#include <span>
#include <vector>

#include "rkdet/matrix.hpp"

namespace rkdet {

/// Tolerance conventions shared across the library. Comparisons are relative,
/// scaled by (1 + magnitude) unless stated otherwise.
namespace tol {
inline constexpr double kDefault = 1e-9;
/// Eigenvalue cutoff, relative to the Frobenius norm of the decomposed matrix.
inline constexpr double kPsdCutoff = 1e-10;
/// Range-membership residual tolerance.
inline constexpr double kRange = 1e-8;
}  // namespace tol

/// max |M_ij - conj(M_ji)| <= tol * (1 + ||M||_F). Throws DimensionError if M is not square.
bool hermitian_check(const Matrix& m, double tol = tol::kDefault);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // column k pairs with eigenvalues[k]
};

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Eigenvalues come back ascending; equal eigenvalues keep the column order
/// the rotations left them in, so the output is reproducible. Throws
/// PreconditionError when `m` is not Hermitian to tol::kDefault.
EigenDecomposition eigh(const Matrix& m);

enum class Definiteness { PositiveDefinite, PositiveSemidefinite, Indefinite };

const char* to_string(Definiteness d);

/// Classifies a Hermitian matrix by its smallest eigenvalue against tol * ||M||_F.
Definiteness psd_check(const Matrix& m, double tol = tol::kPsdCutoff);

/// Determinant by LU with partial pivoting.
Complex determinant(const Matrix& m);

/// Real determinant of a Hermitian positive definite matrix via LDL*.
/// Throws PreconditionError if a pivot is not positive.
double determinant_ldl(const Matrix& m);

/// Moore-Penrose inverse.
///
/// Hermitian input is inverted on its own spectrum; otherwise the
/// eigendecomposition of M*M is used and M+ = (M*M)+ M*. Eigenvalues whose
/// modulus is at most tol times the Frobenius norm of the decomposed matrix
/// are treated as zero.
Matrix moore_penrose(const Matrix& m, double tol = tol::kPsdCutoff);

Matrix kronecker(const Matrix& a, const Matrix& b);

/// Block-diagonal matrix with the given square blocks.
Matrix block_diagonal(std::span<const Matrix> blocks);

/// Top-left submatrix spanning blocks 1..i; (X)_0 is the 1x1 matrix [1].
Matrix leading_principal_block(const BlockMatrix& x, std::size_t i);

/// ||U*U - I||_F <= tol.
bool is_unitary(const Matrix& u, double tol = tol::kDefault);

/// Real part of the LU determinant, for Hermitian input whose determinant is
/// real up to rounding.
double real_determinant(const Matrix& m);

}  // namespace rkdet
