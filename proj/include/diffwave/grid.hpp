#pragma once

#include <vector>

namespace diffwave {

/// Uniform cell-centred grid on [x_left, x_right].
struct Grid {
  double x_left = -1.0;
  double x_right = 1.0;
  int n_cells = 2;

  double dx() const { return (x_right - x_left) / n_cells; }
  double center(int i) const { return x_left + (i + 0.5) * dx(); }
  std::vector<double> centers() const;
  bool operator==(const Grid&) const = default;
};

}  // namespace diffwave
