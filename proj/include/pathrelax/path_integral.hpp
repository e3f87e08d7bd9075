#pragma once

#include <concepts>

#include "pathrelax/model.hpp"
#include "pathrelax/path.hpp"
#include "pathrelax/quadrature.hpp"
#include "pathrelax/state.hpp"

namespace pathrelax {

// Quadrature approximation of  int_0^1 A(phi(s; w_l, w_r)) d_s phi(s) ds.
// `matrix_map` is any callable filling a SquareMatrix from a state.
template <typename MatrixMap>
  requires std::invocable<MatrixMap&, const StateVector&, SquareMatrix&>
StateVector path_integral(MatrixMap&& matrix_map, const PathFamily& phi,
                          const StateVector& w_l, const StateVector& w_r,
                          const Quadrature& quad) {
  const std::size_t m = w_l.size();
  StateVector acc(m);
  StateVector point(m);
  StateVector slope(m);
  SquareMatrix a(m);
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const double s = quad.nodes[k];
    phi.phi(s, w_l, w_r, point);
    phi.dphi_ds(s, w_l, w_r, slope);
    matrix_map(point, a);
    a.accumulate_product(slope, quad.weights[k], acc);
  }
  return acc;
}

// Model-aware variant: every quadrature node is checked against the model's
// admissible set and NonAdmissibleState is thrown if a node leaves it.
StateVector path_integral(const SystemModel& model, const PathFamily& phi,
                          const StateVector& w_l, const StateVector& w_r,
                          const Quadrature& quad);

// Path integral across a single cell-interface jump. Uses the model's
// closed form on the segment family, the quadrature rule otherwise.
StateVector jump_integral(const SystemModel& model, const PathFamily& phi,
                          const StateVector& w_l, const StateVector& w_r,
                          const Quadrature& quad);

}  // namespace pathrelax
