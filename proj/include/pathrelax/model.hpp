#pragma once

#include <cstddef>

#include "pathrelax/errors.hpp"
#include "pathrelax/state.hpp"

namespace pathrelax {

// A nonconservative first-order system  d_t U + A(U) d_x U = 0,  described by
// its dimension, the matrix map A, an admissible set, a wave-speed estimate
// and, when they exist, a flux with A = DF and a source term.
class SystemModel {
public:
  virtual ~SystemModel() = default;

  virtual std::size_t dimension() const = 0;

  // Fills `a` (sized dimension x dimension) with A(u). Callers guarantee
  // admissibility; implementations may assume it.
  virtual void matrix(const StateVector& u, SquareMatrix& a) const = 0;

  // Estimate of the spectral radius of A(u), used for CFL and
  // subcharacteristic bounds.
  virtual double max_speed(const StateVector& u) const = 0;

  virtual bool admissible(const StateVector& u) const = 0;

  virtual bool has_flux() const { return false; }
  virtual StateVector flux(const StateVector& /*u*/) const {
    throw InvalidParam("SystemModel: flux not available");
  }

  virtual bool has_source() const { return false; }
  virtual StateVector source(const StateVector& /*u*/) const {
    return StateVector(dimension());
  }

  // Exact path integral of A between two states along the segment family,
  // when the model provides one in closed form.
  virtual bool has_closed_form_path_integral() const { return false; }
  virtual StateVector closed_form_path_integral(const StateVector& /*u1*/,
                                                const StateVector& /*u2*/) const {
    throw InvalidParam("SystemModel: no closed-form path integral");
  }

  // Throws NonAdmissibleState with context if u is outside the admissible set
  // or contains non-finite components.
  void require_admissible(const StateVector& u, const char* context) const;
};

}  // namespace pathrelax
