#include "wetreg/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "wetreg/error.hpp"

namespace wetreg {

std::vector<double> BorderedTridiagonal::multiply(std::span<const double> x) const {
  const std::size_t m = block_size();
  if (x.size() != m + 1) throw invalid_argument("multiply: size mismatch");
  std::vector<double> y(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double acc = diag[i] * x[i] + column[i] * x[m];
    if (i > 0) acc += lower[i] * x[i - 1];
    if (i + 1 < m) acc += upper[i] * x[i + 1];
    y[i] = acc;
    y[m] += row[i] * x[i];
  }
  return y;
}

std::vector<double> BorderedTridiagonal::to_dense() const {
  const std::size_t m = block_size();
  const std::size_t n = m + 1;
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    d[i * n + i] = diag[i];
    if (i > 0) d[i * n + i - 1] = lower[i];
    if (i + 1 < m) d[i * n + i + 1] = upper[i];
    d[i * n + m] = column[i];
    d[m * n + i] = row[i];
  }
  return d;
}

std::vector<double> solve_bordered(const BorderedTridiagonal& A,
                                   std::span<const double> rhs) {
  const std::size_t m = A.block_size();
  if (m == 0 || rhs.size() != m + 1) {
    throw invalid_argument("solve_bordered: size mismatch");
  }

  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    scale = std::max({scale, std::abs(A.lower[i]), std::abs(A.diag[i]),
                      std::abs(A.upper[i])});
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorKind::linear_solve, "tridiagonal block is zero or non-finite");
  }
  const double pivot_floor = 1e-14 * scale;

  // Thomas factorization, shared by both substitutions.
  std::vector<double> cprime(m, 0.0);
  std::vector<double> denom(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double d = A.diag[i] - (i > 0 ? A.lower[i] * cprime[i - 1] : 0.0);
    if (!(std::abs(d) > pivot_floor)) {
      throw Error(ErrorKind::linear_solve, "tridiagonal pivot below tolerance");
    }
    denom[i] = d;
    cprime[i] = (i + 1 < m) ? A.upper[i] / d : 0.0;
  }
  auto substitute = [&](auto&& source) {
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double prev = i > 0 ? A.lower[i] * y[i - 1] : 0.0;
      y[i] = (source(i) - prev) / denom[i];
    }
    for (std::size_t i = m - 1; i-- > 0;) {
      y[i] -= cprime[i] * y[i + 1];
    }
    return y;
  };

  const std::vector<double> y = substitute([&](std::size_t i) { return rhs[i]; });
  const std::vector<double> z = substitute([&](std::size_t i) { return A.column[i]; });

  double ry = 0.0;
  double rz = 0.0;
  double rnorm = 0.0;
  double znorm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    ry += A.row[i] * y[i];
    rz += A.row[i] * z[i];
    rnorm += std::abs(A.row[i]);
    znorm = std::max(znorm, std::abs(z[i]));
  }
  // Schur complement of the border is -r^T T^{-1} c.
  if (!(std::abs(rz) > 1e-14 * std::max(rnorm * znorm, 1e-300))) {
    throw Error(ErrorKind::linear_solve, "bordered system is singular (zero Schur complement)");
  }
  const double mu = (ry - rhs[m]) / rz;

  std::vector<double> x(m + 1);
  for (std::size_t i = 0; i < m; ++i) x[i] = y[i] - mu * z[i];
  x[m] = mu;
  return x;
}

}  // namespace wetreg
