#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pathrelax/models/blood_vessel.hpp"
#include "pathrelax/schemes/relaxation.hpp"

namespace pathrelax {

enum class RiemannSolverKind { Kirchhoff, ModifiedKirchhoff };

struct NewtonOptions {
  double tolerance = 1e-12;  // absolute residual tolerance, max norm
  int max_iterations = 50;
  int max_backtracks = 20;
  double fd_step = 1e-7;  // scaled by (1 + |sigma|)
};

// Two systems coupled at a static interface. The interface sits at x = 0,
// between the last cell of the left grid and the first cell of the right
// grid; truncation states ua1/ua2 anchor the nonlocal operators.
struct CoupledDomain {
  const SystemModel* left_model = nullptr;
  const SystemModel* right_model = nullptr;
  Grid1D left_grid, right_grid;
  StateVector lambda_left, lambda_right;  // diagonals of Lambda_1, Lambda_2
  StateVector ua1, ua2;
  RiemannSolverKind solver = RiemannSolverKind::Kirchhoff;
  const PathFamily* path = nullptr;
  Quadrature quad;
  NewtonOptions newton;

  void validate() const;
  double mu_left() const;
  double mu_right() const;
};

// One-sided limiting path integrals toward the interface:
//   P1(u) = int A1 along phi from ua1 to u,
//   P2(u) = int A2 along phi from u to ua2.
StateVector p1(const CoupledDomain& domain, const StateVector& u0_minus);
StateVector p2(const CoupledDomain& domain, const StateVector& u0_plus);

// Residual of the path-conservative Kirchhoff conditions in the Lax-curve
// parametrization (sigma-, sigma+). Block 1 couples the one-sided operators,
// block 2 closes the system through the parametrized coupling states
//   U_R = u0- - (sqrt(Lambda1))^{-1} sigma-,  U_L = u0+ + (sqrt(Lambda2))^{-1} sigma+.
// For ModifiedKirchhoff the flux offset F1(ua1) - F2(ua2) is added to each
// block. `out` has size m1 + m2.
void kirchhoff_residual(const CoupledDomain& domain, const StateVector& sigma_minus,
                        const StateVector& sigma_plus, const StateVector& u0_minus,
                        const StateVector& u0_plus, std::span<double> out);

struct InterfaceData {
  StateVector sigma_minus, sigma_plus;
  StateVector u_r, v_r;  // coupling data left of the interface
  StateVector u_l, v_l;  // coupling data right of the interface
  int iterations = 0;    // Newton updates performed (0 when sigma = 0 is a root)
  double residual_norm = 0.0;
};

// Newton iteration on kirchhoff_residual from sigma = 0 with a
// finite-difference Jacobian and backtracking on admissibility violations or
// residual increase. The trace values v0_minus/v0_plus only shift the
// reported v_r/v_l (v_r = v0- + sigma-, v_l = v0+ + sigma+); pass nullptr for
// the sigma-relative convention.
InterfaceData solve_riemann(const CoupledDomain& domain, const StateVector& u0_minus,
                            const StateVector& u0_plus,
                            const StateVector* v0_minus = nullptr,
                            const StateVector* v0_plus = nullptr);

struct ScanResult {
  StateVector sigma_minus, sigma_plus;
  double residual_norm = 0.0;
};

// Brute-force residual scan over a uniform grid in [-half_width, half_width]
// per sigma component; corroborates uniqueness of the Newton root on demand.
ScanResult scan_kirchhoff(const CoupledDomain& domain, const StateVector& u0_minus,
                          const StateVector& u0_plus, double half_width,
                          std::size_t points_per_axis);

// One step of the coupled relaxed scheme. Away from the interface this is the
// per-side relaxed update; at the interface the Riemann solver yields
// (sigma-, sigma+) and the interface fluctuations reduce to sigma- for the
// last left cell and -sigma+ for the first right cell, so no prefix sums are
// formed.
void coupled_relaxed_step(const CoupledDomain& domain, const BoundarySide& outer_left,
                          const BoundarySide& outer_right, const GridSolution& left_in,
                          const GridSolution& right_in, double dt, GridSolution& left_out,
                          GridSolution& right_out, InterfaceData* interface_out = nullptr);

using CoupledObserver = std::function<void(const GridSolution& left, const GridSolution& right,
                                           const InterfaceData& interface)>;

struct CoupledAdvanceResult {
  std::size_t steps = 0;
  double dt_nominal = 0.0;
};

// Advances both sides to t_end with dt = min over sides of cfl_dt, clipping
// the final step. Source terms are applied per side after the hyperbolic
// step. The observer, when given, runs after every step.
CoupledAdvanceResult advance_coupled(const CoupledDomain& domain,
                                     const BoundarySide& outer_left,
                                     const BoundarySide& outer_right, double cfl,
                                     GridSolution& left, GridSolution& right, double t_end,
                                     const CoupledObserver& observe = {});

// Discrete coupling defect: | P1(U_{-1}) + P2(U_0) | per component, evaluated
// on the trace cells (plus the flux offset for ModifiedKirchhoff).
StateVector coupling_error(const CoupledDomain& domain, const GridSolution& left,
                           const GridSolution& right);

// Discrete nonlocal operators, kept for diagnostics and finite-epsilon
// coupled runs; the production coupled step bypasses them.
//   t1_prefix[j] = T^1 at cell j, anchored ua1 -> left_ghost -> cells,
//   t2_suffix[j] = T^2 at cell j, anchored cells -> right_ghost -> ua2.
std::vector<StateVector> t1_prefix(const SystemModel& model, const PathFamily& phi,
                                   const Quadrature& quad, const StateVector& ua1,
                                   const StateVector& left_ghost,
                                   std::span<const StateVector> cells);
std::vector<StateVector> t2_suffix(const SystemModel& model, const PathFamily& phi,
                                   const Quadrature& quad,
                                   std::span<const StateVector> cells,
                                   const StateVector& right_ghost, const StateVector& ua2);

// Boundary state for a pressure-driven vessel inflow: the boundary area comes
// from inverting the pressure law on the prescribed profile and the boundary
// velocity extrapolates the outgoing Riemann invariant W- = u - 4 c(a) of the
// conservative system.
StateVector blood_inflow(const std::function<double(double)>& pressure_profile, double t,
                         const StateVector& first_interior, const BloodVessel& vessel);

// P(t) = p0 sin(pi/2 (t - 1/2))
std::function<double(double)> heart_pressure_profile(double p0);

}  // namespace pathrelax
