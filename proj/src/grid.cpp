#include "pathrelax/grid.hpp"

#include "pathrelax/errors.hpp"

namespace pathrelax {

Grid1D Grid1D::over_interval(double a, double b, std::size_t n) {
  if (!(b > a) || n == 0) throw InvalidParam("Grid1D::over_interval: need b > a and n >= 1");
  return Grid1D{a, (b - a) / static_cast<double>(n), n};
}

}  // namespace pathrelax
