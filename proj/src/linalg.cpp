#include "rkdet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rkdet/errors.hpp"

namespace rkdet {

namespace {

constexpr int kMaxSweeps = 100;

void require_square(const Matrix& m, const char* what) {
  if (!m.is_square()) {
    throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

// (M + M*) / 2 with an exactly real diagonal.
Matrix hermitian_part(const Matrix& m) {
  const std::size_t n = m.rows();
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return h;
}

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) sum += std::norm(a(i, j));
  return std::sqrt(2.0 * sum);
}

// Applies A <- V* A V and E <- E V for the 2x2 unitary V acting on (p, q).
void rotate(Matrix& a, Matrix& e, std::size_t p, std::size_t q, Complex vpp, Complex vpq,
            Complex vqp, Complex vqq) {
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * vpp + akq * vqp;
    a(k, q) = akp * vpq + akq * vqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
    a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex ekp = e(k, p);
    const Complex ekq = e(k, q);
    e(k, p) = ekp * vpp + ekq * vqp;
    e(k, q) = ekp * vpq + ekq * vqq;
  }
}

Matrix pinv_hermitian(const Matrix& h, double tol) {
  const auto dec = eigh(h);
  const double cutoff = tol * h.frobenius_norm();
  const std::size_t n = h.rows();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = dec.eigenvalues[k];
    if (std::abs(lambda) <= cutoff) continue;
    const double inv = 1.0 / lambda;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vi = dec.eigenvectors(i, k) * inv;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(dec.eigenvectors(j, k));
    }
  }
  return out;
}

}  // namespace

bool hermitian_check(const Matrix& m, double tol) {
  require_square(m, "hermitian_check");
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst <= tol * (1.0 + m.frobenius_norm());
}

EigenDecomposition eigh(const Matrix& m) {
  require_square(m, "eigh");
  if (!hermitian_check(m)) throw PreconditionError("eigh: matrix is not Hermitian");

  const std::size_t n = m.rows();
  Matrix a = hermitian_part(m);
  Matrix e = Matrix::identity(n);
  const double scale = a.frobenius_norm();

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= 1e-16 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Negligible relative to both diagonal entries: zero it outright.
        if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
            std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex phase = std::conj(apq / mag);
        rotate(a, e, p, q, c, s, -s * phase, c * phase);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() < a(y, y).real();
  });

  EigenDecomposition out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = e(i, order[k]);
  }
  return out;
}

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite:
      return "PositiveDefinite";
    case Definiteness::PositiveSemidefinite:
      return "PositiveSemidefinite";
    case Definiteness::Indefinite:
      return "Indefinite";
  }
  return "?";
}

Definiteness psd_check(const Matrix& m, double tol) {
  require_square(m, "psd_check");
  if (!hermitian_check(m)) throw PreconditionError("psd_check: matrix is not Hermitian");
  const double smallest = eigh(m).eigenvalues.front();
  const double cutoff = tol * m.frobenius_norm();
  if (smallest > cutoff) return Definiteness::PositiveDefinite;
  if (smallest < -cutoff) return Definiteness::Indefinite;
  return Definiteness::PositiveSemidefinite;
}

Complex determinant(const Matrix& m) {
  require_square(m, "determinant");
  const std::size_t n = m.rows();
  Matrix lu = m;
  Complex det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
    if (lu(pivot, k) == Complex{}) return 0.0;
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
      det = -det;
    }
    const Complex diag = lu(k, k);
    det *= diag;
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex factor = lu(i, k) / diag;
      if (factor == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= factor * lu(k, j);
    }
  }
  return det;
}

double determinant_ldl(const Matrix& m) {
  require_square(m, "determinant_ldl");
  if (!hermitian_check(m)) throw PreconditionError("determinant_ldl: matrix is not Hermitian");
  const std::size_t n = m.rows();
  Matrix l = Matrix::identity(n);
  std::vector<double> d(n);
  double det = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    double dj = m(j, j).real();
    for (std::size_t k = 0; k < j; ++k) dj -= std::norm(l(j, k)) * d[k];
    if (!(dj > 0.0)) throw PreconditionError("determinant_ldl: matrix is not positive definite");
    d[j] = dj;
    det *= dj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex sum = m(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l(i, k) * std::conj(l(j, k)) * d[k];
      l(i, j) = sum / dj;
    }
  }
  return det;
}

Matrix moore_penrose(const Matrix& m, double tol) {
  if (m.is_square() && hermitian_check(m, 1e-14)) return pinv_hermitian(hermitian_part(m), tol);
  const Matrix adj = m.adjoint();
  const Matrix gram = hermitian_part(adj * m);
  return pinv_hermitian(gram, tol) * adj;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

Matrix block_diagonal(std::span<const Matrix> blocks) {
  if (blocks.empty()) throw DimensionError("block_diagonal: no blocks");
  std::size_t n = 0;
  for (const auto& b : blocks) {
    require_square(b, "block_diagonal");
    n += b.rows();
  }
  Matrix out(n, n);
  std::size_t at = 0;
  for (const auto& b : blocks) {
    out.set_block(at, at, b);
    at += b.rows();
  }
  return out;
}

Matrix leading_principal_block(const BlockMatrix& x, std::size_t i) {
  if (i > x.block_count()) {
    throw IndexError("leading_principal_block: index " + std::to_string(i) + " outside 0.." +
                     std::to_string(x.block_count()));
  }
  if (i == 0) return Matrix{{1.0}};
  const std::size_t n = x.partition().offset(i + 1);
  return x.data().block(0, 0, n, n);
}

bool is_unitary(const Matrix& u, double tol) {
  if (!u.is_square()) return false;
  return (u.adjoint() * u - Matrix::identity(u.rows())).frobenius_norm() <= tol;
}

double real_determinant(const Matrix& m) { return determinant(m).real(); }

}  // namespace rkdet
