#pragma once

#include <cstddef>
#include <vector>

#include "pathrelax/state.hpp"

namespace pathrelax {

// Uniform 1D grid. Cell j spans [x_left + j dx, x_left + (j+1) dx); interfaces
// sit at x_left + j dx, so choosing x_left = -n_cells * dx puts the interface
// x = 0 between the last cell of this grid and the first cell of the next.
struct Grid1D {
  double x_left = 0.0;
  double dx = 1.0;
  std::size_t n_cells = 0;

  double cell_center(std::size_t j) const { return x_left + (j + 0.5) * dx; }
  double x_right() const { return x_left + dx * static_cast<double>(n_cells); }

  static Grid1D over_interval(double a, double b, std::size_t n);
};

// Piecewise constant solution: cell averages of U and, for finite-epsilon
// relaxation runs, of the auxiliary variable V.
struct GridSolution {
  Grid1D grid;
  std::vector<StateVector> u;
  std::vector<StateVector> v;
  double time = 0.0;

  bool has_v() const { return !v.empty(); }
};

}  // namespace pathrelax
