#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pathrelax/grid.hpp"
#include "pathrelax/model.hpp"
#include "pathrelax/path.hpp"
#include "pathrelax/path_integral.hpp"
#include "pathrelax/quadrature.hpp"

namespace pathrelax {

// Parameters of the relaxation system: the diagonal of Lambda, the relaxation
// rate epsilon (finite-epsilon scheme only) and the Courant number.
struct RelaxationParams {
  StateVector lambda;
  double epsilon = 0.0;
  double cfl = 0.9;

  static RelaxationParams isotropic(std::size_t m, double mu, double cfl,
                                    double epsilon = 0.0);

  // Largest diagonal entry; equals mu when Lambda = mu I.
  double mu() const;
  bool is_isotropic() const;
  StateVector sqrt_lambda() const;
};

// dt = cfl * dx / sqrt(mu)
double cfl_dt(double dx, double mu, double cfl);

// One boundary of a domain.
//  - NeumannCopy: ghost copies the adjacent interior cell (U and V).
//  - TruncationGhost: ghost data anchored to a truncation state ua; the ghost
//    U defaults to ua itself but can be prescribed, and the ghost V is the
//    path integral connecting ua to the ghost U (negated on the right side).
//  - PrescribedInflow: like TruncationGhost with a time-dependent ghost U
//    computed from the interior trace (e.g. a pressure-driven inflow).
struct BoundarySide {
  enum class Kind { NeumannCopy, TruncationGhost, PrescribedInflow };

  Kind kind = Kind::NeumannCopy;
  StateVector ua;
  std::optional<StateVector> ghost_u;
  std::function<StateVector(double t, const StateVector& interior)> inflow;

  static BoundarySide neumann() { return {}; }
  static BoundarySide truncation(StateVector truncation_state);
  static BoundarySide truncation(StateVector truncation_state, StateVector ghost);
  static BoundarySide prescribed_inflow(
      StateVector truncation_state,
      std::function<StateVector(double, const StateVector&)> inflow);
};

struct BoundarySpec {
  BoundarySide left;
  BoundarySide right;

  static BoundarySpec neumann() { return {}; }
};

struct GhostStates {
  StateVector u_left, u_right;
  StateVector v_left, v_right;
};

// Ghost U for one side, given the adjacent interior trace and the time.
StateVector boundary_ghost_u(const BoundarySide& side, const SystemModel& model,
                             const StateVector& interior, double t);

// Evaluates the boundary specification against the current solution.
GhostStates apply_boundary(const BoundarySpec& bc, const SystemModel& model,
                           const PathFamily& phi, const Quadrature& quad,
                           const GridSolution& sol);

// T_j[U] = sum_{i <= j} int_0^1 A(phi(s; U_{i-1}, U_i)) d_s phi ds, a
// left-to-right prefix sum starting from the left ghost state.
std::vector<StateVector> cumulative_T(const SystemModel& model, const PathFamily& phi,
                                      const Quadrature& quad,
                                      std::span<const StateVector> cells,
                                      const StateVector& left_ghost);

// Interface fluctuations of the relaxed scheme,
//   D-+(U_L, U_R) = 1/2 int A(phi) d_s phi  -+  1/2 sqrt(Lambda) (U_R - U_L),
// which satisfy D-(U,U) = D+(U,U) = 0 and D- + D+ = path integral.
StateVector fluctuation_minus(const SystemModel& model, const StateVector& sqrt_lambda,
                              const PathFamily& phi, const Quadrature& quad,
                              const StateVector& u_l, const StateVector& u_r);
StateVector fluctuation_plus(const SystemModel& model, const StateVector& sqrt_lambda,
                             const PathFamily& phi, const Quadrature& quad,
                             const StateVector& u_l, const StateVector& u_r);

// One step of the relaxed (zero-relaxation-limit) scheme:
//   U_j  <-  U_j - dt/(2 dx) [B_{j-1/2} + B_{j+1/2}]
//              + dt/(2 dx) sqrt(Lambda) (U_{j-1} - 2 U_j + U_{j+1})
// with B the per-interface path integrals. Reads `in`, writes `out`.
void relaxed_step(const SystemModel& model, const RelaxationParams& params,
                  const PathFamily& phi, const Quadrature& quad,
                  const GridSolution& in, const GhostStates& ghosts, double dt,
                  GridSolution& out);
GridSolution relaxed_step(const SystemModel& model, const RelaxationParams& params,
                          const PathFamily& phi, const Quadrature& quad,
                          const GridSolution& in, const GhostStates& ghosts, double dt);

// One step of the implicit-explicit relaxation scheme for finite epsilon.
// U is updated explicitly first, then T[U^{n+1}] is formed from freshly
// applied boundary data, then the V update is solved pointwise (the implicit
// equation is linear and diagonal). Takes the boundary specification rather
// than ghost states because it needs ghosts at both time levels.
void relaxation_step(const SystemModel& model, const RelaxationParams& params,
                     const PathFamily& phi, const Quadrature& quad,
                     const BoundarySpec& bc, const GridSolution& in, double dt,
                     GridSolution& out);
GridSolution relaxation_step(const SystemModel& model, const RelaxationParams& params,
                             const PathFamily& phi, const Quadrature& quad,
                             const BoundarySpec& bc, const GridSolution& in, double dt);

// Explicit Euler on the model's source term, applied in place.
void source_step(const SystemModel& model, double dt, GridSolution& sol);

// Sets sol.v = T[U] (well-prepared auxiliary data for finite-epsilon runs).
void prepare_auxiliary(const SystemModel& model, const PathFamily& phi,
                       const Quadrature& quad, const BoundarySpec& bc,
                       GridSolution& sol);

enum class SchemeKind { Relaxed, Relaxation };

struct AdvanceResult {
  std::size_t steps = 0;
  double dt_nominal = 0.0;
};

// Advances sol to t_end with dt from cfl_dt, clipping the final step to land
// exactly on t_end. Applies the source term after each hyperbolic step and
// aborts with cell/time context if a state leaves the admissible set.
AdvanceResult advance(const SystemModel& model, const RelaxationParams& params,
                      const PathFamily& phi, const Quadrature& quad,
                      const BoundarySpec& bc, SchemeKind scheme, GridSolution& sol,
                      double t_end);

}  // namespace pathrelax
