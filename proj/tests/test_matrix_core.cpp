#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "rkdet/errors.hpp"
#include "rkdet/linalg.hpp"
#include "rkdet/oracles.hpp"
#include "test_support.hpp"

namespace rkdet {
namespace {

using testing::gaussian;
using namespace std::complex_literals;

TEST(Matrix, RejectsEmptyShapes) {
  EXPECT_THROW(Matrix(0, 2), DimensionError);
  EXPECT_THROW(Matrix(2, 0), DimensionError);
  EXPECT_THROW(Matrix(2, 2, std::vector<Complex>(3)), DimensionError);
}

TEST(Matrix, ArithmeticAndBlocks) {
  const Matrix a{{1, 2}, {3, 4}};
  const Matrix b{{0, 1}, {1, 0}};
  EXPECT_EQ(a * b, (Matrix{{2, 1}, {4, 3}}));
  EXPECT_EQ(a + b, (Matrix{{1, 3}, {4, 4}}));
  EXPECT_EQ(a.adjoint(), (Matrix{{1, 3}, {2, 4}}));
  EXPECT_EQ(Matrix({{1i, 2}}).adjoint(), (Matrix{{-1i}, {2}}));
  EXPECT_EQ(a.block(1, 0, 1, 2), (Matrix{{3, 4}}));
  EXPECT_THROW(a * Matrix(3, 1), DimensionError);
  EXPECT_THROW(a.block(1, 1, 2, 1), IndexError);
}

TEST(Matrix, DotIsLinearInFirstArgument) {
  const Matrix x = Matrix::column({1i, 0});
  const Matrix y = Matrix::column({1, 0});
  EXPECT_EQ(dot(x, y), Complex(0, 1));
  EXPECT_EQ(dot(y, x), Complex(0, -1));
}

TEST(BlockPartition, OffsetsAndShapes) {
  const BlockPartition p({2, 1, 3});
  EXPECT_EQ(p.count(), 3u);
  EXPECT_EQ(p.dimension(), 6u);
  EXPECT_EQ(p.offset(1), 0u);
  EXPECT_EQ(p.offset(3), 3u);
  EXPECT_EQ(p.offset(4), 6u);
  EXPECT_FALSE(p.is_uniform());
  EXPECT_TRUE(BlockPartition::uniform(3, 2).is_uniform());
  EXPECT_TRUE(BlockPartition::scalar(4).is_scalar());
  EXPECT_THROW(BlockPartition({2, 0}), DimensionError);
  EXPECT_THROW(BlockPartition(std::vector<std::size_t>{}), DimensionError);
  EXPECT_THROW(p.size(0), IndexError);
  EXPECT_THROW(BlockMatrix(Matrix::identity(3), BlockPartition({2, 2})), DimensionError);
}

TEST(HermitianCheck, Examples) {
  EXPECT_TRUE(hermitian_check(Matrix::identity(2), 1e-12));
  EXPECT_TRUE(hermitian_check(Matrix{{0, 1i}, {-1i, 0}}, 1e-12));
  EXPECT_FALSE(hermitian_check(Matrix{{0, 1}, {2, 0}}, 1e-12));
  EXPECT_THROW(hermitian_check(Matrix(2, 3)), DimensionError);
}

TEST(Eigh, Examples) {
  const auto identity = eigh(Matrix::identity(3));
  for (double v : identity.eigenvalues) EXPECT_NEAR(v, 1.0, 1e-14);

  const auto swap = eigh(Matrix{{1, 2}, {2, 1}});
  EXPECT_NEAR(swap.eigenvalues[0], -1.0, 1e-12);
  EXPECT_NEAR(swap.eigenvalues[1], 3.0, 1e-12);

  const auto diag = eigh(Matrix::diagonal({5, 2, 7}));
  EXPECT_NEAR(diag.eigenvalues[0], 2.0, 1e-14);
  EXPECT_NEAR(diag.eigenvalues[1], 5.0, 1e-14);
  EXPECT_NEAR(diag.eigenvalues[2], 7.0, 1e-14);

  EXPECT_THROW(eigh(Matrix{{0, 1}, {2, 0}}), PreconditionError);
}

TEST(Eigh, TiesKeepColumnOrder) {
  const auto eig = eigh(Matrix::diagonal({1, 1, 1}));
  EXPECT_MATRIX_NEAR(eig.eigenvectors, Matrix::identity(3), 0.0);
}

TEST(Eigh, ReconstructsRandomHermitian) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    const Matrix g = gaussian(n, n, rng);
    const Matrix m = g + g.adjoint();
    const auto eig = eigh(m);
    const Matrix rebuilt =
        eig.eigenvectors * Matrix::diagonal(eig.eigenvalues) * eig.eigenvectors.adjoint();
    EXPECT_LE((rebuilt - m).frobenius_norm(), 1e-10 * (1.0 + m.frobenius_norm()));
    EXPECT_LE((eig.eigenvectors.adjoint() * eig.eigenvectors - Matrix::identity(n))
                  .frobenius_norm(),
              1e-10);
    EXPECT_TRUE(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
  }
}

TEST(PsdCheck, Examples) {
  EXPECT_EQ(psd_check(Matrix::identity(2)), Definiteness::PositiveDefinite);
  EXPECT_EQ(psd_check(Matrix{{1, 2}, {2, 1}}), Definiteness::Indefinite);
  EXPECT_EQ(psd_check(Matrix{{1, 1}, {1, 1}}), Definiteness::PositiveSemidefinite);
  EXPECT_THROW(psd_check(Matrix{{0, 1}, {2, 0}}), PreconditionError);
}

TEST(PsdCheck, GramProductsAreNeverIndefinite) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    const Matrix b = gaussian(1 + rng.below(6), n, rng);
    EXPECT_NE(psd_check(b.adjoint() * b), Definiteness::Indefinite);
  }
}

TEST(Determinant, Examples) {
  EXPECT_NEAR(std::abs(determinant(Matrix::identity(4)) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(determinant(Matrix{{2, 1}, {1, 2}}).real(), 3.0, 1e-14);
  const Matrix m3{{2, 1, 1}, {1, 2, 1}, {1, 1, 2}};
  EXPECT_NEAR(determinant(m3).real(), 4.0, 1e-13);
  EXPECT_NEAR(oracle::cofactor_determinant(m3).real(), 4.0, 0.0);
  EXPECT_NEAR(determinant_ldl(m3), 4.0, 1e-13);
  EXPECT_EQ(determinant(Matrix{{1, 2}, {2, 4}}), Complex(0.0));
  EXPECT_THROW(determinant(Matrix(2, 3)), DimensionError);
  EXPECT_THROW(determinant_ldl(Matrix{{1, 2}, {2, 1}}), PreconditionError);
}

TEST(Determinant, MatchesCofactorOracle) {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    const Matrix m = gaussian(n, n, rng);
    const Complex lu = determinant(m);
    const Complex reference = oracle::cofactor_determinant(m);
    EXPECT_LE(std::abs(lu - reference), 1e-9 * std::max(1.0, std::abs(reference)));
  }
}

TEST(Determinant, HermitianResultIsReal) {
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const Matrix m = random_pd(n, rng);
    const Complex d = determinant(m);
    EXPECT_LE(std::abs(d.imag()), 1e-10 * (1.0 + std::abs(d)));
    EXPECT_LE(testing::relative_error(determinant_ldl(m), d.real()), 1e-10);
  }
}

TEST(MoorePenrose, Examples) {
  EXPECT_MATRIX_NEAR(moore_penrose(Matrix::diagonal({2, 0})), Matrix::diagonal({0.5, 0}), 1e-15);
  EXPECT_MATRIX_NEAR(moore_penrose(Matrix::identity(3)), Matrix::identity(3), 1e-15);
  EXPECT_MATRIX_NEAR(moore_penrose(Matrix{{1, 1}, {1, 1}}),
                     (Matrix{{0.25, 0.25}, {0.25, 0.25}}), 1e-14);
  EXPECT_MATRIX_NEAR(moore_penrose(Matrix{{1, 1}}), (Matrix{{0.5}, {0.5}}), 1e-14);
}

TEST(MoorePenrose, PenroseIdentities) {
  Rng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = 1 + rng.below(6);
    const std::size_t cols = 1 + rng.below(6);
    const std::size_t rank = 1 + rng.below(std::min(rows, cols));
    const Matrix left = gaussian(rows, rank, rng);
    const Matrix a = left * gaussian(rank, cols, rng);
    const Matrix x = moore_penrose(a);
    const Matrix ax = a * x;
    const Matrix xa = x * a;
    EXPECT_LE((ax * a - a).frobenius_norm(), 1e-8 * (1.0 + a.frobenius_norm()));
    EXPECT_LE((xa * x - x).frobenius_norm(), 1e-8 * (1.0 + x.frobenius_norm()));
    EXPECT_LE((ax.adjoint() - ax).frobenius_norm(), 1e-8 * (1.0 + ax.frobenius_norm()));
    EXPECT_LE((xa.adjoint() - xa).frobenius_norm(), 1e-8 * (1.0 + xa.frobenius_norm()));
  }
}

TEST(Kronecker, Examples) {
  EXPECT_EQ(kronecker(Matrix::identity(2), Matrix::identity(2)), Matrix::identity(4));
  EXPECT_EQ(kronecker(Matrix{{0, 1}, {1, 0}}, Matrix{{2}}), (Matrix{{0, 2}, {2, 0}}));
  const Matrix a{{2, 1}, {1, 2}};
  EXPECT_NEAR(determinant(kronecker(a, a)).real(), 81.0, 1e-11);
  EXPECT_EQ(kronecker(Matrix(2, 3), Matrix(4, 5)).rows(), 8u);
  EXPECT_EQ(kronecker(Matrix(2, 3), Matrix(4, 5)).cols(), 15u);
}

TEST(Kronecker, DeterminantIdentity) {
  Rng rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(3);
    const std::size_t q = 1 + rng.below(3);
    const Matrix a = gaussian(n, n, rng);
    const Matrix b = gaussian(q, q, rng);
    const Complex lhs = determinant(kronecker(a, b));
    const Complex rhs = std::pow(determinant(a), static_cast<double>(q)) *
                        std::pow(determinant(b), static_cast<double>(n));
    EXPECT_LE(std::abs(lhs - rhs), 1e-8 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(LeadingPrincipalBlock, Examples) {
  Rng rng(17);
  const BlockMatrix x(random_pd(4, rng), BlockPartition({2, 2}));
  EXPECT_EQ(leading_principal_block(x, 0), Matrix{{1}});
  EXPECT_EQ(leading_principal_block(x, 1), x.data().block(0, 0, 2, 2));
  EXPECT_EQ(leading_principal_block(BlockMatrix(Matrix::identity(4), BlockPartition({2, 2})), 2),
            Matrix::identity(4));
  EXPECT_THROW(leading_principal_block(x, 3), IndexError);
}

TEST(BlockDiagonal, AssemblesBlocks) {
  const std::vector<Matrix> blocks{Matrix{{1}}, Matrix{{2, 3}, {4, 5}}};
  EXPECT_EQ(block_diagonal(blocks), (Matrix{{1, 0, 0}, {0, 2, 3}, {0, 4, 5}}));
}

}  // namespace
}  // namespace rkdet
