#pragma once

#include <optional>

#include "rkdet/inequalities.hpp"
#include "rkdet/matrix.hpp"

// Slow reference implementations that share no code with the library's
// numerical paths. Intended for dimensions up to about 4.
namespace rkdet::oracle {

/// Laplace expansion along the first row.
Complex cofactor_determinant(const Matrix& m);

/// Minimum squared norm b* G^{-1} b of the interpolation problem with PSD Gram G,
/// restricted to a maximal independent subfamily picked by diagonally pivoted
/// elimination and solved by Gaussian elimination. Empty when b is not
/// consistent with G.
std::optional<double> least_norm_squared(const Matrix& gram, const Matrix& data,
                                         double tol = 1e-10);

struct ElementarySums {
  double lhs;  // sum over all alpha minus sum over E
  double rhs;  // sum over all alpha minus sum over F
};

/// Enumerates alpha in {0,1}^{n x m} with p = a - 1:
/// E = alphas with an all-ones row, F = alphas whose every column has a one.
ElementarySums elementary_enumeration(const RealGrid& a);

}  // namespace rkdet::oracle
