#include "numerics.hpp"

#include <stdexcept>

namespace diffwave::detail {

void solve_tridiagonal(std::span<const double> sub, std::span<double> diag,
                       std::span<const double> sup, std::span<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
  }
}

std::vector<double> derivative4(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 5) throw std::invalid_argument("derivative4: need at least 5 points");
  std::vector<double> d(n);
  const double s = 1.0 / (12.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) * s;
  }
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s;
  const std::size_t m = n - 1;
  d[m] = (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] +
          3.0 * f[m - 4]) * s;
  d[m - 1] = (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] -
              f[m - 4]) * s;
  return d;
}

std::vector<double> second_derivative4(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 6) throw std::invalid_argument("second_derivative4: need at least 6 points");
  std::vector<double> d(n);
  const double s = 1.0 / (12.0 * h * h);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2]) * s;
  }
  // one-sided, fourth order
  auto left = [&](std::size_t i) {
    return (45.0 * f[i] - 154.0 * f[i + 1] + 214.0 * f[i + 2] - 156.0 * f[i + 3] +
            61.0 * f[i + 4] - 10.0 * f[i + 5]) * s;
  };
  auto right = [&](std::size_t i) {
    return (45.0 * f[i] - 154.0 * f[i - 1] + 214.0 * f[i - 2] - 156.0 * f[i - 3] +
            61.0 * f[i - 4] - 10.0 * f[i - 5]) * s;
  };
  d[0] = left(0);
  d[n - 1] = right(n - 1);
  // second point: (10 f0 - 15 f1 - 4 f2 + 14 f3 - 6 f4 + f5) / (12 h^2)
  d[1] = (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]) * s;
  d[n - 2] = (10.0 * f[n - 1] - 15.0 * f[n - 2] - 4.0 * f[n - 3] + 14.0 * f[n - 4] -
              6.0 * f[n - 5] + f[n - 6]) * s;
  return d;
}

double trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2) return 0.0;
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return sum * h;
}

}  // namespace diffwave::detail
