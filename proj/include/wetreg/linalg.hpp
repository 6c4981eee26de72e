#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wetreg {

/// (m+1) x (m+1) system
///
///     [ T    c ] [x]   [f]
///     [ r^T  0 ] [mu] = [s]
///
/// with T tridiagonal of size m. lower[0] and upper[m-1] are unused.
struct BorderedTridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> column;  // c
  std::vector<double> row;     // r

  explicit BorderedTridiagonal(std::size_t m = 0)
      : lower(m, 0.0), diag(m, 0.0), upper(m, 0.0), column(m, 0.0), row(m, 0.0) {}

  std::size_t block_size() const noexcept { return diag.size(); }
  std::size_t size() const noexcept { return diag.size() + 1; }

  /// y = A x for x of length size().
  std::vector<double> multiply(std::span<const double> x) const;

  /// Row-major dense copy, used by tests and diagnostics.
  std::vector<double> to_dense() const;
};

/// Solves the bordered system by block elimination: one tridiagonal
/// factorization (no pivoting), two substitutions, and a scalar Schur
/// complement for the last unknown. Throws Error(linear_solve) when a pivot
/// or the Schur complement is below 1e-14 relative to the matrix scale.
std::vector<double> solve_bordered(const BorderedTridiagonal& A,
                                   std::span<const double> rhs);

}  // namespace wetreg
