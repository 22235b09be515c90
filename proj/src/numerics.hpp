#pragma once

// Small numerical kernels shared by the library sources. Not installed.

#include <cstddef>
#include <span>
#include <vector>

namespace diffwave::detail {

/// Thomas algorithm for a tridiagonal system. `sub[0]` and `sup[n-1]` are
/// ignored. Overwrites `rhs` with the solution; `diag` is used as scratch.
void solve_tridiagonal(std::span<const double> sub, std::span<double> diag,
                       std::span<const double> sup, std::span<double> rhs);

/// First derivative on a uniform grid: fourth-order centred in the interior,
/// fourth-order one-sided in the two outermost points on each side.
std::vector<double> derivative4(std::span<const double> f, double h);

/// Second derivative with the same stencil orders as derivative4.
std::vector<double> second_derivative4(std::span<const double> f, double h);

/// Cubic Hermite interpolation on [0, 1] between (f0, d0) and (f1, d1),
/// where the slopes are already multiplied by the interval length.
inline double hermite(double s, double f0, double d0, double f1, double d1) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2.0 * s3 - 3.0 * s2 + 1.0) * f0 + (s3 - 2.0 * s2 + s) * d0 +
         (-2.0 * s3 + 3.0 * s2) * f1 + (s3 - s2) * d1;
}

/// Composite trapezoid rule with uniform spacing h.
double trapezoid(std::span<const double> f, double h);

}  // namespace diffwave::detail
