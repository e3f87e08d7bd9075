#pragma once

#include <cmath>

#include "pathrelax/model.hpp"

namespace pathrelax {

// Two superimposed shallow water layers over a flat bottom in one dimension.
// State ordering (h1, q1, h2, q2): layer heights and mass flows. The coupling
// entries a_23 = g h1 and a_41 = r g h2 make the system nonconservative.
class TwoLayerSwe final : public SystemModel {
public:
  explicit TwoLayerSwe(double gravity = 9.81, double density_ratio = 0.9)
      : g_(gravity), r_(density_ratio) {}

  std::size_t dimension() const override { return 4; }

  bool admissible(const StateVector& u) const override {
    return u[0] > 0.0 && u[2] > 0.0;
  }

  void matrix(const StateVector& u, SquareMatrix& a) const override {
    const double h1 = u[0], q1 = u[1], h2 = u[2], q2 = u[3];
    const double w1 = q1 * q1 / (h1 * h1);
    const double w2 = q2 * q2 / (h2 * h2);
    a.set_zero();
    a(0, 1) = 1.0;
    a(1, 0) = -w1 + g_ * h1;
    a(1, 1) = 2.0 * w1;
    a(1, 2) = g_ * h1;
    a(2, 3) = 1.0;
    a(3, 0) = r_ * g_ * h2;
    a(3, 2) = -w2 + g_ * h2;
    a(3, 3) = 2.0 * w2;
  }

  // |q1 + q2| / (h1 + h2) + sqrt(g (h1 + h2)): an estimate of the spectral
  // radius, sharp for equal layer velocities. Used only to size CFL and
  // subcharacteristic bounds; the benchmark runs fix mu = 25.
  double max_speed(const StateVector& u) const override {
    const double h = u[0] + u[2];
    return std::fabs(u[1] + u[3]) / h + std::sqrt(g_ * h);
  }

  double gravity() const { return g_; }
  double density_ratio() const { return r_; }

private:
  double g_;
  double r_;
};

}  // namespace pathrelax
