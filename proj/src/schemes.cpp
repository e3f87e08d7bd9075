#include "pathrelax/schemes/relaxation.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

namespace pathrelax {

RelaxationParams RelaxationParams::isotropic(std::size_t m, double mu, double cfl,
                                             double epsilon) {
  if (mu <= 0.0) throw InvalidParam("RelaxationParams: mu must be positive");
  RelaxationParams p;
  p.lambda = StateVector(m, mu);
  p.cfl = cfl;
  p.epsilon = epsilon;
  return p;
}

double RelaxationParams::mu() const {
  double m = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) m = std::max(m, lambda[i]);
  return m;
}

bool RelaxationParams::is_isotropic() const {
  for (std::size_t i = 1; i < lambda.size(); ++i)
    if (lambda[i] != lambda[0]) return false;
  return lambda.size() > 0;
}

StateVector RelaxationParams::sqrt_lambda() const {
  StateVector s(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] <= 0.0) throw InvalidParam("RelaxationParams: Lambda entries must be positive");
    s[i] = std::sqrt(lambda[i]);
  }
  return s;
}

double cfl_dt(double dx, double mu, double cfl) {
  if (dx <= 0.0 || mu <= 0.0 || cfl <= 0.0 || cfl > 1.0)
    throw InvalidParam("cfl_dt: need dx > 0, mu > 0 and cfl in (0, 1]");
  return cfl * dx / std::sqrt(mu);
}

BoundarySide BoundarySide::truncation(StateVector truncation_state) {
  BoundarySide s;
  s.kind = Kind::TruncationGhost;
  s.ua = std::move(truncation_state);
  return s;
}

BoundarySide BoundarySide::truncation(StateVector truncation_state, StateVector ghost) {
  BoundarySide s;
  s.kind = Kind::TruncationGhost;
  s.ua = std::move(truncation_state);
  s.ghost_u = std::move(ghost);
  return s;
}

BoundarySide BoundarySide::prescribed_inflow(
    StateVector truncation_state,
    std::function<StateVector(double, const StateVector&)> inflow) {
  BoundarySide s;
  s.kind = Kind::PrescribedInflow;
  s.ua = std::move(truncation_state);
  s.inflow = std::move(inflow);
  return s;
}

namespace {

void check_cfl(double dt, double dx, const StateVector& sqrt_lambda) {
  double smax = 0.0;
  for (std::size_t i = 0; i < sqrt_lambda.size(); ++i) smax = std::max(smax, sqrt_lambda[i]);
  if (dt * smax > dx * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time step " << dt << " exceeds the stability bound " << dx / smax;
    throw CflViolation(msg.str());
  }
}

void check_cell(const SystemModel& model, const StateVector& u, std::size_t cell, double time) {
  if (model.admissible(u) && u.all_finite()) return;
  std::ostringstream msg;
  msg << "cell " << cell << " at t = " << time << " left the admissible set";
  throw NonAdmissibleState(msg.str());
}

#ifndef NDEBUG
void assert_subcharacteristic(const SystemModel& model, const RelaxationParams& params,
                              const GridSolution& sol) {
  if (!params.is_isotropic()) return;
  const double mu = params.mu();
  for (const StateVector& u : sol.u) {
    const double s = model.max_speed(u);
    assert(mu + 1e-9 >= s * s && "subcharacteristic condition violated");
  }
}
#endif

}  // namespace

StateVector boundary_ghost_u(const BoundarySide& side, const SystemModel& model,
                             const StateVector& interior, double t) {
  switch (side.kind) {
    case BoundarySide::Kind::NeumannCopy:
      return interior;
    case BoundarySide::Kind::TruncationGhost:
      return side.ghost_u ? *side.ghost_u : side.ua;
    case BoundarySide::Kind::PrescribedInflow: {
      if (!side.inflow) throw InvalidParam("apply_boundary: inflow callback missing");
      StateVector g = side.inflow(t, interior);
      model.require_admissible(g, "apply_boundary: inflow state");
      return g;
    }
  }
  throw InvalidParam("apply_boundary: unknown boundary kind");
}

GhostStates apply_boundary(const BoundarySpec& bc, const SystemModel& model,
                           const PathFamily& phi, const Quadrature& quad,
                           const GridSolution& sol) {
  if (sol.u.empty()) throw InvalidParam("apply_boundary: empty solution");
  const std::size_t m = model.dimension();

  GhostStates g;
  g.u_left = boundary_ghost_u(bc.left, model, sol.u.front(), sol.time);
  g.u_right = boundary_ghost_u(bc.right, model, sol.u.back(), sol.time);
  model.require_admissible(g.u_left, "apply_boundary: left ghost");
  model.require_admissible(g.u_right, "apply_boundary: right ghost");

  // Auxiliary-variable ghosts: copy under Neumann, truncation path integrals
  // otherwise (zero when the ghost coincides with the truncation state).
  if (bc.left.kind == BoundarySide::Kind::NeumannCopy) {
    g.v_left = sol.has_v() ? sol.v.front() : StateVector(m);
  } else {
    g.v_left = jump_integral(model, phi, bc.left.ua, g.u_left, quad);
  }
  if (bc.right.kind == BoundarySide::Kind::NeumannCopy) {
    g.v_right = sol.has_v() ? sol.v.back() : StateVector(m);
  } else {
    g.v_right = -1.0 * jump_integral(model, phi, g.u_right, bc.right.ua, quad);
  }
  return g;
}

std::vector<StateVector> cumulative_T(const SystemModel& model, const PathFamily& phi,
                                      const Quadrature& quad,
                                      std::span<const StateVector> cells,
                                      const StateVector& left_ghost) {
  std::vector<StateVector> t;
  t.reserve(cells.size());
  StateVector acc(model.dimension());
  const StateVector* prev = &left_ghost;
  for (const StateVector& cell : cells) {
    acc += jump_integral(model, phi, *prev, cell, quad);
    t.push_back(acc);
    prev = &cell;
  }
  return t;
}

StateVector fluctuation_minus(const SystemModel& model, const StateVector& sqrt_lambda,
                              const PathFamily& phi, const Quadrature& quad,
                              const StateVector& u_l, const StateVector& u_r) {
  StateVector d = jump_integral(model, phi, u_l, u_r, quad);
  d *= 0.5;
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= 0.5 * sqrt_lambda[i] * (u_r[i] - u_l[i]);
  return d;
}

StateVector fluctuation_plus(const SystemModel& model, const StateVector& sqrt_lambda,
                             const PathFamily& phi, const Quadrature& quad,
                             const StateVector& u_l, const StateVector& u_r) {
  StateVector d = jump_integral(model, phi, u_l, u_r, quad);
  d *= 0.5;
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += 0.5 * sqrt_lambda[i] * (u_r[i] - u_l[i]);
  return d;
}

void relaxed_step(const SystemModel& model, const RelaxationParams& params,
                  const PathFamily& phi, const Quadrature& quad,
                  const GridSolution& in, const GhostStates& ghosts, double dt,
                  GridSolution& out) {
  assert(&out != &in && "double-buffer contract: out must not alias in");
  const std::size_t n = in.u.size();
  const double dx = in.grid.dx;
  const StateVector sqrt_lambda = params.sqrt_lambda();
  check_cfl(dt, dx, sqrt_lambda);
#ifndef NDEBUG
  assert_subcharacteristic(model, params, in);
#endif

  // Per-interface path integrals B_{j-1/2}, shared by adjacent cells.
  std::vector<StateVector> b(n + 1);
  b[0] = jump_integral(model, phi, ghosts.u_left, in.u[0], quad);
  for (std::size_t j = 1; j < n; ++j)
    b[j] = jump_integral(model, phi, in.u[j - 1], in.u[j], quad);
  b[n] = jump_integral(model, phi, in.u[n - 1], ghosts.u_right, quad);

  out.grid = in.grid;
  out.time = in.time + dt;
  out.u.resize(n);
  out.v.clear();
  const double r2 = dt / (2.0 * dx);
  for (std::size_t j = 0; j < n; ++j) {
    const StateVector& left = (j == 0) ? ghosts.u_left : in.u[j - 1];
    const StateVector& mid = in.u[j];
    const StateVector& right = (j + 1 == n) ? ghosts.u_right : in.u[j + 1];
    StateVector next = mid;
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] -= r2 * (b[j][i] + b[j + 1][i]);
      next[i] += r2 * sqrt_lambda[i] * (left[i] - 2.0 * mid[i] + right[i]);
    }
    check_cell(model, next, j, out.time);
    out.u[j] = next;
  }
}

GridSolution relaxed_step(const SystemModel& model, const RelaxationParams& params,
                          const PathFamily& phi, const Quadrature& quad,
                          const GridSolution& in, const GhostStates& ghosts, double dt) {
  GridSolution out;
  relaxed_step(model, params, phi, quad, in, ghosts, dt, out);
  return out;
}

void relaxation_step(const SystemModel& model, const RelaxationParams& params,
                     const PathFamily& phi, const Quadrature& quad,
                     const BoundarySpec& bc, const GridSolution& in, double dt,
                     GridSolution& out) {
  assert(&out != &in && "double-buffer contract: out must not alias in");
  if (!in.has_v()) throw InvalidParam("relaxation_step: auxiliary variable V missing");
  if (params.epsilon <= 0.0) throw InvalidParam("relaxation_step: epsilon must be positive");
  const std::size_t n = in.u.size();
  const double dx = in.grid.dx;
  const StateVector sqrt_lambda = params.sqrt_lambda();
  check_cfl(dt, dx, sqrt_lambda);
#ifndef NDEBUG
  assert_subcharacteristic(model, params, in);
#endif

  const GhostStates ghosts = apply_boundary(bc, model, phi, quad, in);
  out.grid = in.grid;
  out.time = in.time + dt;
  out.u.resize(n);
  out.v.resize(n);

  const double r = dt / dx;
  auto u_at = [&](std::ptrdiff_t j) -> const StateVector& {
    if (j < 0) return ghosts.u_left;
    if (j >= static_cast<std::ptrdiff_t>(n)) return ghosts.u_right;
    return in.u[static_cast<std::size_t>(j)];
  };
  auto v_at = [&](std::ptrdiff_t j) -> const StateVector& {
    if (j < 0) return ghosts.v_left;
    if (j >= static_cast<std::ptrdiff_t>(n)) return ghosts.v_right;
    return in.v[static_cast<std::size_t>(j)];
  };

  // Explicit U update with fluxes F_{j-1/2} = (V_{j-1} + V_j)/2
  // - sqrt(Lambda)(U_j - U_{j-1})/2.
  for (std::size_t j = 0; j < n; ++j) {
    const std::ptrdiff_t js = static_cast<std::ptrdiff_t>(j);
    StateVector next = in.u[j];
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double f_right = 0.5 * (v_at(js)[i] + v_at(js + 1)[i]) -
                             0.5 * sqrt_lambda[i] * (u_at(js + 1)[i] - u_at(js)[i]);
      const double f_left = 0.5 * (v_at(js - 1)[i] + v_at(js)[i]) -
                            0.5 * sqrt_lambda[i] * (u_at(js)[i] - u_at(js - 1)[i]);
      next[i] -= r * (f_right - f_left);
    }
    check_cell(model, next, j, out.time);
    out.u[j] = next;
  }

  // Nonlocal operator at the new time level, anchored at the new left ghost.
  GridSolution updated;
  updated.grid = in.grid;
  updated.time = out.time;
  updated.u = out.u;
  const GhostStates ghosts_new = apply_boundary(bc, model, phi, quad, updated);
  const std::vector<StateVector> t_new =
      cumulative_T(model, phi, quad, out.u, ghosts_new.u_left);

  // Pointwise-implicit V update; the implicit equation is linear and diagonal.
  const double relax = dt / params.epsilon;
  for (std::size_t j = 0; j < n; ++j) {
    const std::ptrdiff_t js = static_cast<std::ptrdiff_t>(j);
    StateVector next = in.v[j];
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double lam = params.lambda[i];
      const double g_right = 0.5 * lam * (u_at(js)[i] + u_at(js + 1)[i]) -
                             0.5 * sqrt_lambda[i] * (v_at(js + 1)[i] - v_at(js)[i]);
      const double g_left = 0.5 * lam * (u_at(js - 1)[i] + u_at(js)[i]) -
                            0.5 * sqrt_lambda[i] * (v_at(js)[i] - v_at(js - 1)[i]);
      next[i] = (next[i] - r * (g_right - g_left) + relax * t_new[j][i]) / (1.0 + relax);
    }
    out.v[j] = next;
  }
}

GridSolution relaxation_step(const SystemModel& model, const RelaxationParams& params,
                             const PathFamily& phi, const Quadrature& quad,
                             const BoundarySpec& bc, const GridSolution& in, double dt) {
  GridSolution out;
  relaxation_step(model, params, phi, quad, bc, in, dt, out);
  return out;
}

void source_step(const SystemModel& model, double dt, GridSolution& sol) {
  if (!model.has_source()) return;
  for (std::size_t j = 0; j < sol.u.size(); ++j) {
    check_cell(model, sol.u[j], j, sol.time);
    sol.u[j] += dt * model.source(sol.u[j]);
    check_cell(model, sol.u[j], j, sol.time);
  }
}

void prepare_auxiliary(const SystemModel& model, const PathFamily& phi,
                       const Quadrature& quad, const BoundarySpec& bc,
                       GridSolution& sol) {
  sol.v.clear();
  const GhostStates ghosts = apply_boundary(bc, model, phi, quad, sol);
  sol.v = cumulative_T(model, phi, quad, sol.u, ghosts.u_left);
}

AdvanceResult advance(const SystemModel& model, const RelaxationParams& params,
                      const PathFamily& phi, const Quadrature& quad,
                      const BoundarySpec& bc, SchemeKind scheme, GridSolution& sol,
                      double t_end) {
  AdvanceResult result;
  result.dt_nominal = cfl_dt(sol.grid.dx, params.mu(), params.cfl);
  if (scheme == SchemeKind::Relaxation && !sol.has_v())
    prepare_auxiliary(model, phi, quad, bc, sol);

  GridSolution scratch;
  while (t_end - sol.time > result.dt_nominal * 1e-9) {
    const double dt = std::min(result.dt_nominal, t_end - sol.time);
    if (scheme == SchemeKind::Relaxed) {
      const GhostStates ghosts = apply_boundary(bc, model, phi, quad, sol);
      relaxed_step(model, params, phi, quad, sol, ghosts, dt, scratch);
    } else {
      relaxation_step(model, params, phi, quad, bc, sol, dt, scratch);
    }
    std::swap(sol, scratch);
    source_step(model, dt, sol);
    ++result.steps;
  }
  return result;
}

}  // namespace pathrelax
