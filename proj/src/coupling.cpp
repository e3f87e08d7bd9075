#include "pathrelax/coupling/coupling.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>

namespace pathrelax {

namespace {

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::fabs(v));
  return m;
}

// Gaussian elimination with partial pivoting on an n x n system, n <= 16.
void solve_dense(std::vector<double>& a, std::vector<double>& rhs, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::fabs(a[row * n + col]) > std::fabs(a[pivot * n + col])) pivot = row;
    if (a[pivot * n + col] == 0.0)
      throw NoConvergence("solve_riemann: singular Newton Jacobian", 0, 0.0);
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
      std::swap(rhs[col], rhs[pivot]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (std::size_t row = col + 1; row < n; ++row) {
      const double f = a[row * n + col] * inv;
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
      rhs[row] -= f * rhs[col];
    }
  }
  for (std::size_t row = n; row-- > 0;) {
    double s = rhs[row];
    for (std::size_t k = row + 1; k < n; ++k) s -= a[row * n + k] * rhs[k];
    rhs[row] = s / a[row * n + row];
  }
}

StateVector sqrt_diag(const StateVector& lambda) {
  StateVector s(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] <= 0.0) throw InvalidParam("CoupledDomain: Lambda entries must be positive");
    s[i] = std::sqrt(lambda[i]);
  }
  return s;
}

double diag_max(const StateVector& lambda) {
  double m = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) m = std::max(m, lambda[i]);
  return m;
}

}  // namespace

void CoupledDomain::validate() const {
  if (!left_model || !right_model || !path) throw InvalidParam("CoupledDomain: missing model or path");
  if (left_model->dimension() != lambda_left.size() ||
      right_model->dimension() != lambda_right.size())
    throw InvalidParam("CoupledDomain: Lambda dimension mismatch");
  if (ua1.size() != left_model->dimension() || ua2.size() != right_model->dimension())
    throw InvalidParam("CoupledDomain: truncation state dimension mismatch");
  if (left_model->dimension() != right_model->dimension())
    throw InvalidParam("CoupledDomain: Kirchhoff coupling needs m1 = m2");
  const double tol_l = 1e-9 * left_grid.dx;
  const double tol_r = 1e-9 * right_grid.dx;
  if (std::fabs(left_grid.x_right()) > tol_l || std::fabs(right_grid.x_left) > tol_r)
    throw InvalidParam("CoupledDomain: interface must sit at x = 0 between the grids");
  left_model->require_admissible(ua1, "CoupledDomain: ua1");
  right_model->require_admissible(ua2, "CoupledDomain: ua2");
  if (solver == RiemannSolverKind::ModifiedKirchhoff &&
      (!left_model->has_flux() || !right_model->has_flux()))
    throw InvalidParam("CoupledDomain: ModifiedKirchhoff needs conservative models");
}

double CoupledDomain::mu_left() const { return diag_max(lambda_left); }
double CoupledDomain::mu_right() const { return diag_max(lambda_right); }

StateVector p1(const CoupledDomain& domain, const StateVector& u0_minus) {
  return jump_integral(*domain.left_model, *domain.path, domain.ua1, u0_minus, domain.quad);
}

StateVector p2(const CoupledDomain& domain, const StateVector& u0_plus) {
  return jump_integral(*domain.right_model, *domain.path, u0_plus, domain.ua2, domain.quad);
}

namespace {

// Shared by the public residual and the Newton driver, with P1/P2 and the
// modified-Kirchhoff flux offset precomputed.
void residual_with_cached(const CoupledDomain& domain, const StateVector& p1_cached,
                          const StateVector& p2_cached, const StateVector& flux_offset,
                          const StateVector& sqrt_l1, const StateVector& sqrt_l2,
                          const StateVector& sigma_minus, const StateVector& sigma_plus,
                          const StateVector& u0_minus, const StateVector& u0_plus,
                          std::span<double> out) {
  const std::size_t m = domain.left_model->dimension();

  StateVector u_r = u0_minus;
  for (std::size_t i = 0; i < m; ++i) u_r[i] -= sigma_minus[i] / sqrt_l1[i];
  StateVector u_l = u0_plus;
  for (std::size_t i = 0; i < m; ++i) u_l[i] += sigma_plus[i] / sqrt_l2[i];
  domain.left_model->require_admissible(u_r, "kirchhoff_residual: U_R");
  domain.right_model->require_admissible(u_l, "kirchhoff_residual: U_L");

  const StateVector left_arc =
      jump_integral(*domain.left_model, *domain.path, u0_minus, u_r, domain.quad);
  const StateVector right_arc =
      jump_integral(*domain.right_model, *domain.path, u_l, u0_plus, domain.quad);

  for (std::size_t i = 0; i < m; ++i) {
    out[i] = p1_cached[i] + p2_cached[i] + sigma_minus[i] - sigma_plus[i] + flux_offset[i];
    out[m + i] = p1_cached[i] + left_arc[i] + p2_cached[i] + right_arc[i] + flux_offset[i];
  }
}

StateVector flux_offset_for(const CoupledDomain& domain) {
  StateVector off(domain.left_model->dimension());
  if (domain.solver == RiemannSolverKind::ModifiedKirchhoff) {
    off = domain.left_model->flux(domain.ua1) - domain.right_model->flux(domain.ua2);
  }
  return off;
}

}  // namespace

void kirchhoff_residual(const CoupledDomain& domain, const StateVector& sigma_minus,
                        const StateVector& sigma_plus, const StateVector& u0_minus,
                        const StateVector& u0_plus, std::span<double> out) {
  domain.validate();
  if (out.size() != domain.left_model->dimension() + domain.right_model->dimension())
    throw InvalidParam("kirchhoff_residual: output span has wrong size");
  residual_with_cached(domain, p1(domain, u0_minus), p2(domain, u0_plus),
                       flux_offset_for(domain), sqrt_diag(domain.lambda_left),
                       sqrt_diag(domain.lambda_right), sigma_minus, sigma_plus, u0_minus,
                       u0_plus, out);
}

InterfaceData solve_riemann(const CoupledDomain& domain, const StateVector& u0_minus,
                            const StateVector& u0_plus, const StateVector* v0_minus,
                            const StateVector* v0_plus) {
  domain.validate();
  const std::size_t m = domain.left_model->dimension();
  const std::size_t dim = 2 * m;
  const NewtonOptions& opt = domain.newton;

  const StateVector p1_cached = p1(domain, u0_minus);
  const StateVector p2_cached = p2(domain, u0_plus);
  const StateVector offset = flux_offset_for(domain);
  const StateVector sqrt_l1 = sqrt_diag(domain.lambda_left);
  const StateVector sqrt_l2 = sqrt_diag(domain.lambda_right);

  auto evaluate = [&](const std::vector<double>& x, std::vector<double>& res) {
    StateVector sm(m), sp(m);
    for (std::size_t i = 0; i < m; ++i) {
      sm[i] = x[i];
      sp[i] = x[m + i];
    }
    residual_with_cached(domain, p1_cached, p2_cached, offset, sqrt_l1, sqrt_l2, sm, sp,
                         u0_minus, u0_plus, res);
  };

  std::vector<double> x(dim, 0.0), res(dim), jac(dim * dim), step(dim), trial(dim),
      trial_res(dim), pert_res(dim);
  evaluate(x, res);
  double norm = max_abs(res);
  int iterations = 0;

  // One Newton update with backtracking: halve the step on admissibility
  // violations or when the residual fails to decrease. Returns false when no
  // decrease was found.
  auto newton_update = [&]() -> bool {
    // Forward-difference Jacobian, falling back to a backward step if the
    // perturbed coupling state leaves the admissible set.
    for (std::size_t col = 0; col < dim; ++col) {
      const double h = opt.fd_step * (1.0 + std::fabs(x[col]));
      std::vector<double> xp = x;
      xp[col] += h;
      double used = h;
      try {
        evaluate(xp, pert_res);
      } catch (const NonAdmissibleState&) {
        xp[col] = x[col] - h;
        used = -h;
        evaluate(xp, pert_res);
      }
      for (std::size_t row = 0; row < dim; ++row)
        jac[row * dim + col] = (pert_res[row] - res[row]) / used;
    }

    step = res;
    for (double& s : step) s = -s;
    solve_dense(jac, step, dim);

    double scale = 1.0;
    for (int bt = 0; bt <= opt.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < dim; ++i) trial[i] = x[i] + scale * step[i];
      try {
        evaluate(trial, trial_res);
      } catch (const NonAdmissibleState&) {
        scale *= 0.5;
        continue;
      }
      const double trial_norm = max_abs(trial_res);
      if (trial_norm < norm) {
        x = trial;
        res = trial_res;
        norm = trial_norm;
        return true;
      }
      scale *= 0.5;
    }
    return false;
  };

  while (norm > opt.tolerance) {
    if (iterations >= opt.max_iterations)
      throw NoConvergence("solve_riemann: Newton iteration budget exhausted", iterations, norm);
    ++iterations;
    if (!newton_update())
      throw NoConvergence("solve_riemann: backtracking failed to reduce the residual",
                          iterations, norm);
  }

  // The stopping test can be met with the residual only just under the
  // tolerance; one polishing update pushes it to the round-off floor (typical
  // quadratic convergence). Not counted as a convergence iteration and
  // allowed to fail quietly when the residual is already at the floor.
  if (norm > 1e-14 && iterations > 0) newton_update();

  InterfaceData data;
  data.sigma_minus = StateVector(m);
  data.sigma_plus = StateVector(m);
  for (std::size_t i = 0; i < m; ++i) {
    data.sigma_minus[i] = x[i];
    data.sigma_plus[i] = x[m + i];
  }
  data.u_r = u0_minus;
  data.u_l = u0_plus;
  for (std::size_t i = 0; i < m; ++i) {
    data.u_r[i] -= data.sigma_minus[i] / sqrt_l1[i];
    data.u_l[i] += data.sigma_plus[i] / sqrt_l2[i];
  }
  data.v_r = v0_minus ? *v0_minus + data.sigma_minus : data.sigma_minus;
  data.v_l = v0_plus ? *v0_plus + data.sigma_plus : data.sigma_plus;
  data.iterations = iterations;
  data.residual_norm = norm;

#ifndef NDEBUG
  // Lax membership: sigma- = sqrt(Lambda1)(u0- - U_R), sigma+ = sqrt(Lambda2)(U_L - u0+).
  for (std::size_t i = 0; i < m; ++i) {
    const double lhs_m = sqrt_l1[i] * (u0_minus[i] - data.u_r[i]);
    const double lhs_p = sqrt_l2[i] * (data.u_l[i] - u0_plus[i]);
    assert(std::fabs(lhs_m - data.sigma_minus[i]) <=
           1e-12 * (1.0 + std::fabs(data.sigma_minus[i])));
    assert(std::fabs(lhs_p - data.sigma_plus[i]) <=
           1e-12 * (1.0 + std::fabs(data.sigma_plus[i])));
  }
#endif
  return data;
}

ScanResult scan_kirchhoff(const CoupledDomain& domain, const StateVector& u0_minus,
                          const StateVector& u0_plus, double half_width,
                          std::size_t points_per_axis) {
  domain.validate();
  if (points_per_axis < 2 || half_width <= 0.0)
    throw InvalidParam("scan_kirchhoff: need half_width > 0 and at least 2 points per axis");
  const std::size_t m = domain.left_model->dimension();
  const std::size_t dim = 2 * m;

  const StateVector p1_cached = p1(domain, u0_minus);
  const StateVector p2_cached = p2(domain, u0_plus);
  const StateVector offset = flux_offset_for(domain);
  const StateVector sqrt_l1 = sqrt_diag(domain.lambda_left);
  const StateVector sqrt_l2 = sqrt_diag(domain.lambda_right);

  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> res(dim);
  ScanResult best;
  best.residual_norm = std::numeric_limits<double>::infinity();
  const double h = 2.0 * half_width / static_cast<double>(points_per_axis - 1);

  bool done = false;
  while (!done) {
    StateVector sm(m), sp(m);
    for (std::size_t i = 0; i < m; ++i) {
      sm[i] = -half_width + h * static_cast<double>(idx[i]);
      sp[i] = -half_width + h * static_cast<double>(idx[m + i]);
    }
    try {
      residual_with_cached(domain, p1_cached, p2_cached, offset, sqrt_l1, sqrt_l2, sm, sp,
                           u0_minus, u0_plus, res);
      const double norm = max_abs(res);
      if (norm < best.residual_norm) {
        best.residual_norm = norm;
        best.sigma_minus = sm;
        best.sigma_plus = sp;
      }
    } catch (const NonAdmissibleState&) {
      // grid point outside the admissible set; skip
    }
    // odometer increment
    std::size_t d = 0;
    while (d < dim && ++idx[d] == points_per_axis) idx[d++] = 0;
    done = (d == dim);
  }
  return best;
}

void coupled_relaxed_step(const CoupledDomain& domain, const BoundarySide& outer_left,
                          const BoundarySide& outer_right, const GridSolution& left_in,
                          const GridSolution& right_in, double dt, GridSolution& left_out,
                          GridSolution& right_out, InterfaceData* interface_out) {
  domain.validate();
  assert(&left_out != &left_in && &right_out != &right_in);
  if (left_in.u.empty() || right_in.u.empty())
    throw InvalidParam("coupled_relaxed_step: empty side");

  const SystemModel& ml = *domain.left_model;
  const SystemModel& mr = *domain.right_model;
  const PathFamily& phi = *domain.path;
  const Quadrature& quad = domain.quad;
  const StateVector sqrt_l1 = sqrt_diag(domain.lambda_left);
  const StateVector sqrt_l2 = sqrt_diag(domain.lambda_right);

  const double bound = std::min(left_in.grid.dx / std::sqrt(domain.mu_left()),
                                right_in.grid.dx / std::sqrt(domain.mu_right()));
  if (dt > bound * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "coupled time step " << dt << " exceeds the stability bound " << bound;
    throw CflViolation(msg.str());
  }

  const InterfaceData iface =
      solve_riemann(domain, left_in.u.back(), right_in.u.front());

  const StateVector ghost_l = boundary_ghost_u(outer_left, ml, left_in.u.front(), left_in.time);
  const StateVector ghost_r = boundary_ghost_u(outer_right, mr, right_in.u.back(), right_in.time);
  ml.require_admissible(ghost_l, "coupled_relaxed_step: left ghost");
  mr.require_admissible(ghost_r, "coupled_relaxed_step: right ghost");

  // One side of the coupled update. `interface_fluct` is the fluctuation the
  // side receives at x = 0: sigma- for the left side, -sigma+ for the right.
  auto update_side = [&](const SystemModel& model, const StateVector& sqrt_lam,
                         const GridSolution& in, const StateVector& ghost,
                         const StateVector& interface_fluct, bool side_is_left,
                         GridSolution& out) {
    const std::size_t n = in.u.size();
    const double r = dt / in.grid.dx;

    // Path integrals on interior edges and the outer-ghost edge; the
    // interface edge is handled through the Riemann solver.
    std::vector<StateVector> b(n);
    if (side_is_left) {
      b[0] = jump_integral(model, phi, ghost, in.u[0], quad);
      for (std::size_t j = 1; j < n; ++j)
        b[j] = jump_integral(model, phi, in.u[j - 1], in.u[j], quad);
    } else {
      for (std::size_t j = 0; j + 1 < n; ++j)
        b[j] = jump_integral(model, phi, in.u[j], in.u[j + 1], quad);
      b[n - 1] = jump_integral(model, phi, in.u[n - 1], ghost, quad);
    }

    out.grid = in.grid;
    out.time = in.time + dt;
    out.u.resize(n);
    out.v.clear();
    for (std::size_t j = 0; j < n; ++j) {
      const StateVector& mid = in.u[j];
      StateVector next = mid;
      // left-edge D+ and right-edge D- of cell j
      for (std::size_t i = 0; i < next.size(); ++i) {
        double d_plus, d_minus;
        if (side_is_left) {
          const StateVector& lnb = (j == 0) ? ghost : in.u[j - 1];
          d_plus = 0.5 * b[j][i] + 0.5 * sqrt_lam[i] * (mid[i] - lnb[i]);
          if (j + 1 == n) {
            d_minus = interface_fluct[i];
          } else {
            d_minus = 0.5 * b[j + 1][i] - 0.5 * sqrt_lam[i] * (in.u[j + 1][i] - mid[i]);
          }
        } else {
          if (j == 0) {
            d_plus = interface_fluct[i];
          } else {
            d_plus = 0.5 * b[j - 1][i] + 0.5 * sqrt_lam[i] * (mid[i] - in.u[j - 1][i]);
          }
          const StateVector& rnb = (j + 1 == n) ? ghost : in.u[j + 1];
          d_minus = 0.5 * b[j][i] - 0.5 * sqrt_lam[i] * (rnb[i] - mid[i]);
        }
        next[i] -= r * (d_plus + d_minus);
      }
      if (!model.admissible(next) || !next.all_finite()) {
        std::ostringstream msg;
        msg << (side_is_left ? "left" : "right") << " cell " << j << " at t = " << out.time
            << " left the admissible set";
        throw NonAdmissibleState(msg.str());
      }
      out.u[j] = next;
    }
  };

  StateVector minus_sigma_plus = iface.sigma_plus;
  minus_sigma_plus *= -1.0;
  update_side(ml, sqrt_l1, left_in, ghost_l, iface.sigma_minus, true, left_out);
  update_side(mr, sqrt_l2, right_in, ghost_r, minus_sigma_plus, false, right_out);

  if (interface_out) *interface_out = iface;
}

CoupledAdvanceResult advance_coupled(const CoupledDomain& domain,
                                     const BoundarySide& outer_left,
                                     const BoundarySide& outer_right, double cfl,
                                     GridSolution& left, GridSolution& right, double t_end,
                                     const CoupledObserver& observe) {
  domain.validate();
  CoupledAdvanceResult result;
  result.dt_nominal = std::min(cfl_dt(left.grid.dx, domain.mu_left(), cfl),
                               cfl_dt(right.grid.dx, domain.mu_right(), cfl));

  GridSolution left_scratch, right_scratch;
  InterfaceData iface;
  while (t_end - left.time > result.dt_nominal * 1e-9) {
    const double dt = std::min(result.dt_nominal, t_end - left.time);
    coupled_relaxed_step(domain, outer_left, outer_right, left, right, dt, left_scratch,
                         right_scratch, &iface);
    std::swap(left, left_scratch);
    std::swap(right, right_scratch);
    source_step(*domain.left_model, dt, left);
    source_step(*domain.right_model, dt, right);
    ++result.steps;
    if (observe) observe(left, right, iface);
  }
  return result;
}

StateVector coupling_error(const CoupledDomain& domain, const GridSolution& left,
                           const GridSolution& right) {
  domain.validate();
  StateVector defect = p1(domain, left.u.back()) + p2(domain, right.u.front());
  if (domain.solver == RiemannSolverKind::ModifiedKirchhoff) defect += flux_offset_for(domain);
  for (std::size_t i = 0; i < defect.size(); ++i) defect[i] = std::fabs(defect[i]);
  return defect;
}

std::vector<StateVector> t1_prefix(const SystemModel& model, const PathFamily& phi,
                                   const Quadrature& quad, const StateVector& ua1,
                                   const StateVector& left_ghost,
                                   std::span<const StateVector> cells) {
  std::vector<StateVector> t;
  t.reserve(cells.size());
  StateVector acc = jump_integral(model, phi, ua1, left_ghost, quad);
  const StateVector* prev = &left_ghost;
  for (const StateVector& cell : cells) {
    acc += jump_integral(model, phi, *prev, cell, quad);
    t.push_back(acc);
    prev = &cell;
  }
  return t;
}

std::vector<StateVector> t2_suffix(const SystemModel& model, const PathFamily& phi,
                                   const Quadrature& quad,
                                   std::span<const StateVector> cells,
                                   const StateVector& right_ghost, const StateVector& ua2) {
  std::vector<StateVector> t(cells.size());
  StateVector acc = jump_integral(model, phi, right_ghost, ua2, quad);
  const StateVector* next = &right_ghost;
  for (std::size_t j = cells.size(); j-- > 0;) {
    acc += jump_integral(model, phi, cells[j], *next, quad);
    t[j] = -1.0 * acc;
    next = &cells[j];
  }
  return t;
}

StateVector blood_inflow(const std::function<double(double)>& pressure_profile, double t,
                         const StateVector& first_interior, const BloodVessel& vessel) {
  vessel.require_admissible(first_interior, "blood_inflow: interior state");
  const double a_b = vessel.area_from_pressure(pressure_profile(t));
  const double w_minus = first_interior[1] - 4.0 * vessel.celerity(first_interior[0]);
  const double u_b = w_minus + 4.0 * vessel.celerity(a_b);
  return {a_b, u_b};
}

std::function<double(double)> heart_pressure_profile(double p0) {
  return [p0](double t) { return p0 * std::sin(0.5 * std::numbers::pi * (t - 0.5)); };
}

}  // namespace pathrelax
