#include "rkdet/oracles.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "rkdet/errors.hpp"

namespace rkdet::oracle {

namespace {

Matrix minor_without(const Matrix& m, std::size_t col) {
  const std::size_t n = m.rows();
  Matrix out(n - 1, n - 1);
  for (std::size_t r = 1; r < n; ++r) {
    std::size_t cc = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (c == col) continue;
      out(r - 1, cc++) = m(r, c);
    }
  }
  return out;
}

// Plain Gaussian elimination with partial pivoting on a square system.
std::vector<Complex> gauss_solve(std::vector<std::vector<Complex>> a, std::vector<Complex> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(a[r][k]) > std::abs(a[pivot][k])) pivot = r;
    std::swap(a[k], a[pivot]);
    std::swap(b[k], b[pivot]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const Complex f = a[r][k] / a[k][k];
      for (std::size_t c = k; c < n; ++c) a[r][c] -= f * a[k][c];
      b[r] -= f * b[k];
    }
  }
  std::vector<Complex> x(n);
  for (std::size_t k = n; k-- > 0;) {
    Complex acc = b[k];
    for (std::size_t c = k + 1; c < n; ++c) acc -= a[k][c] * x[c];
    x[k] = acc / a[k][k];
  }
  return x;
}

}  // namespace

Complex cofactor_determinant(const Matrix& m) {
  if (!m.is_square()) throw DimensionError("cofactor_determinant: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  Complex total = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    const double sign = c % 2 == 0 ? 1.0 : -1.0;
    total += sign * m(0, c) * cofactor_determinant(minor_without(m, c));
  }
  return total;
}

std::optional<double> least_norm_squared(const Matrix& gram, const Matrix& data, double tol) {
  if (!gram.is_square() || data.cols() != 1 || data.rows() != gram.rows()) {
    throw DimensionError("least_norm_squared: shape mismatch");
  }
  const std::size_t n = gram.rows();

  // Diagonally pivoted elimination on a working copy selects independent indices.
  Matrix work = gram;
  std::vector<std::size_t> chosen;
  std::vector<bool> used(n, false);
  const double cutoff = tol * (1.0 + gram.frobenius_norm());
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    double best_value = cutoff;
    for (std::size_t k = 0; k < n; ++k) {
      if (!used[k] && work(k, k).real() > best_value) {
        best = k;
        best_value = work(k, k).real();
      }
    }
    if (best == n) break;
    used[best] = true;
    chosen.push_back(best);
    const Complex pivot = work(best, best);
    for (std::size_t r = 0; r < n; ++r) {
      if (used[r]) continue;
      const Complex f = work(r, best) / pivot;
      for (std::size_t c = 0; c < n; ++c) work(r, c) -= f * work(best, c);
    }
  }

  const std::size_t k = chosen.size();
  if (k == 0) {
    double b2 = 0.0;
    for (std::size_t r = 0; r < n; ++r) b2 += std::norm(data[r]);
    if (std::sqrt(b2) > 1e-8) return std::nullopt;
    return 0.0;
  }
  std::vector<std::vector<Complex>> a(k, std::vector<Complex>(k));
  std::vector<Complex> b(k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) a[r][c] = gram(chosen[r], chosen[c]);
    b[r] = data[chosen[r]];
  }
  const std::vector<Complex> x = gauss_solve(a, b);

  double residual = 0.0;
  double b_norm = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < k; ++c) acc += gram(r, chosen[c]) * x[c];
    residual += std::norm(acc - data[r]);
    b_norm += std::norm(data[r]);
  }
  if (std::sqrt(residual) > 1e-8 * (1.0 + std::sqrt(b_norm))) return std::nullopt;

  Complex value = 0.0;
  for (std::size_t r = 0; r < k; ++r) value += std::conj(b[r]) * x[r];
  return value.real();
}

ElementarySums elementary_enumeration(const RealGrid& a) {
  const std::size_t n = a.size();
  const std::size_t m = a.front().size();
  const std::size_t cells = n * m;
  if (cells > 20) throw DimensionError("elementary_enumeration: grid too large");

  double all = 0.0;
  double in_e = 0.0;
  double in_f = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
    auto bit = [&](std::size_t i, std::size_t j) { return (mask >> (i * m + j)) & 1U; };
    double term = 1.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (bit(i, j)) term *= a[i][j] - 1.0;

    bool full_row = false;
    for (std::size_t i = 0; i < n && !full_row; ++i) {
      bool row = true;
      for (std::size_t j = 0; j < m; ++j) row = row && bit(i, j);
      full_row = row;
    }
    bool every_column = true;
    for (std::size_t j = 0; j < m && every_column; ++j) {
      bool hit = false;
      for (std::size_t i = 0; i < n; ++i) hit = hit || bit(i, j);
      every_column = hit;
    }
    all += term;
    if (full_row) in_e += term;
    if (every_column) in_f += term;
  }
  return {all - in_e, all - in_f};
}

}  // namespace rkdet::oracle
