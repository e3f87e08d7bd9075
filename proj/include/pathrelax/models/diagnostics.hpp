#pragma once

#include <cstddef>
#include <span>

#include "pathrelax/model.hpp"

namespace pathrelax {

// First-order expansion defect term M(U)(d_x U) d_x U with components
//   M_k = sum_{i,j,l} d_x U^i d_x U^j a_{li}(U) (d_j a_{kl}(U) - d_l a_{kj}(U)).
// Vanishes identically for conservative systems (A = DF). Matrix partials are
// taken by central finite differences with step 1e-6 * max(1, |U_l|).
StateVector m_term(const SystemModel& model, const StateVector& u, const StateVector& dxu);

// Finite-difference Jacobian of the model's flux, for consistency checks
// against the matrix map when a flux exists.
void fd_flux_jacobian(const SystemModel& model, const StateVector& u, SquareMatrix& out);

struct SubcharReport {
  bool pass = true;
  double worst_margin = 0.0;  // min over samples of mu - max_speed(U)^2
  std::size_t worst_sample = 0;
};

// Verifies mu >= max_speed(U)^2 on each sample state.
SubcharReport subchar_check(const SystemModel& model, double mu,
                            std::span<const StateVector> samples);

}  // namespace pathrelax
