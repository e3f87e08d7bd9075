#include "pathrelax/path_integral.hpp"

#include <sstream>

namespace pathrelax {

void SystemModel::require_admissible(const StateVector& u, const char* context) const {
  if (admissible(u) && u.all_finite()) return;
  std::ostringstream msg;
  msg << context << ": state (";
  for (std::size_t i = 0; i < u.size(); ++i) msg << (i ? ", " : "") << u[i];
  msg << ") is not admissible";
  throw NonAdmissibleState(msg.str());
}

StateVector path_integral(const SystemModel& model, const PathFamily& phi,
                          const StateVector& w_l, const StateVector& w_r,
                          const Quadrature& quad) {
  const std::size_t m = model.dimension();
  StateVector acc(m);
  StateVector point(m);
  StateVector slope(m);
  SquareMatrix a(m);
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const double s = quad.nodes[k];
    phi.phi(s, w_l, w_r, point);
    model.require_admissible(point, "path_integral: quadrature node");
    phi.dphi_ds(s, w_l, w_r, slope);
    model.matrix(point, a);
    a.accumulate_product(slope, quad.weights[k], acc);
  }
  return acc;
}

StateVector jump_integral(const SystemModel& model, const PathFamily& phi,
                          const StateVector& w_l, const StateVector& w_r,
                          const Quadrature& quad) {
  if (phi.is_segment_family() && model.has_closed_form_path_integral()) {
    return model.closed_form_path_integral(w_l, w_r);
  }
  return path_integral(model, phi, w_l, w_r, quad);
}

}  // namespace pathrelax
