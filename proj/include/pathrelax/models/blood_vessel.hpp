#pragma once

#include <cmath>
#include <numbers>

#include "pathrelax/model.hpp"

namespace pathrelax {

// Reduced 1D vessel model; state (a, u) = (section area, axial velocity).
// Pressure law p(a) = beta (sqrt(a) - sqrt(a0)) with beta = E h0 sqrt(pi)/a0.
// The Coriolis coefficient alpha selects the velocity profile: alpha = 1 makes
// the system conservative, alpha = 4/3 corresponds to Poiseuille flow.
class BloodVessel final : public SystemModel {
public:
  static constexpr double kDefaultFriction = 8.0 * std::numbers::pi * 1e-4;

  BloodVessel(double alpha, double beta, double rho = 1.0,
              double k_r = kDefaultFriction, double a0 = 5.0)
      : alpha_(alpha), beta_(beta), rho_(rho), k_r_(k_r), a0_(a0) {}

  // beta from the vessel properties: Young modulus E, wall thickness h0,
  // reference area a0.
  static BloodVessel from_elasticity(double young_modulus, double wall_thickness,
                                     double a0, double alpha, double rho = 1.0,
                                     double k_r = kDefaultFriction) {
    const double beta = young_modulus * wall_thickness * std::sqrt(std::numbers::pi) / a0;
    return BloodVessel(alpha, beta, rho, k_r, a0);
  }

  std::size_t dimension() const override { return 2; }

  bool admissible(const StateVector& u) const override { return u[0] > 0.0; }

  void matrix(const StateVector& u, SquareMatrix& m) const override {
    const double a = u[0], vel = u[1];
    m.set_zero();
    m(0, 0) = vel;
    m(0, 1) = a;
    m(1, 0) = (alpha_ - 1.0) * vel * vel + beta_ / (2.0 * rho_ * std::sqrt(a));
    m(1, 1) = (2.0 * alpha_ - 1.0) * vel;
  }

  // Exact spectral radius from the quadratic formula:
  // lambda = alpha u +- sqrt((alpha-1)^2 u^2 + (alpha-1) a u^2 + beta sqrt(a)/(2 rho)).
  double max_speed(const StateVector& u) const override {
    const double a = u[0], vel = u[1];
    const double rad = (alpha_ - 1.0) * (alpha_ - 1.0) * vel * vel +
                       (alpha_ - 1.0) * a * vel * vel +
                       beta_ * std::sqrt(a) / (2.0 * rho_);
    return std::fabs(alpha_ * vel) + std::sqrt(std::max(rad, 0.0));
  }

  bool has_flux() const override { return alpha_ == 1.0; }

  // F(U) = (a u, u^2/2 + p(a)/rho); only valid in the conservative case.
  StateVector flux(const StateVector& u) const override {
    if (!has_flux()) throw InvalidParam("BloodVessel: flux requires alpha = 1");
    return {u[0] * u[1], 0.5 * u[1] * u[1] + pressure(u[0]) / rho_};
  }

  bool has_source() const override { return true; }

  // Friction term (0, -K_R u / a).
  StateVector source(const StateVector& u) const override {
    return {0.0, -k_r_ * u[1] / u[0]};
  }

  bool has_closed_form_path_integral() const override { return true; }

  // Segment-path integral of A in closed form. The cubic difference quotient
  // (u2^3 - u1^3)/(u2 - u1) is evaluated as u2^2 + u1 u2 + u1^2 so equal
  // velocities are regular.
  StateVector closed_form_path_integral(const StateVector& u1,
                                        const StateVector& u2) const override {
    const double a1 = u1[0], v1 = u1[1];
    const double a2 = u2[0], v2 = u2[1];
    const double c0 = 0.5 * ((v2 + v1) * (a2 - a1) + (a2 + a1) * (v2 - v1));
    const double c1 = (alpha_ - 1.0) / 3.0 * (v2 * v2 + v1 * v2 + v1 * v1) * (a2 - a1) +
                      beta_ / rho_ * (std::sqrt(a2) - std::sqrt(a1)) +
                      0.5 * (2.0 * alpha_ - 1.0) * (v2 * v2 - v1 * v1);
    return {c0, c1};
  }

  double pressure(double a) const {
    if (a <= 0.0) throw NonAdmissibleState("BloodVessel::pressure: a <= 0");
    return beta_ * (std::sqrt(a) - std::sqrt(a0_));
  }

  double area_from_pressure(double p) const {
    const double root = std::sqrt(a0_) + p / beta_;
    if (root <= 0.0) throw NonAdmissibleState("BloodVessel::area_from_pressure: p <= -beta sqrt(a0)");
    return root * root;
  }

  // Characteristic celerity of the conservative (alpha = 1) system.
  double celerity(double a) const { return std::sqrt(beta_ / (2.0 * rho_)) * std::pow(a, 0.25); }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double rho() const { return rho_; }
  double friction() const { return k_r_; }
  double reference_area() const { return a0_; }

private:
  double alpha_;
  double beta_;
  double rho_;
  double k_r_;
  double a0_;
};

}  // namespace pathrelax
