#include "pathrelax/models/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace pathrelax {

namespace {

double fd_step(double component) { return 1e-6 * std::max(1.0, std::fabs(component)); }

}  // namespace

StateVector m_term(const SystemModel& model, const StateVector& u, const StateVector& dxu) {
  const std::size_t m = model.dimension();
  model.require_admissible(u, "m_term");

  SquareMatrix a(m);
  model.matrix(u, a);

  // partial[l](k, j) = d a_kj / d U^l by central differences.
  std::vector<SquareMatrix> partial(m, SquareMatrix(m));
  SquareMatrix plus(m), minus(m);
  for (std::size_t l = 0; l < m; ++l) {
    const double h = fd_step(u[l]);
    StateVector up = u, um = u;
    up[l] += h;
    um[l] -= h;
    model.require_admissible(up, "m_term: stencil state");
    model.require_admissible(um, "m_term: stencil state");
    model.matrix(up, plus);
    model.matrix(um, minus);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < m; ++j)
        partial[l](k, j) = (plus(k, j) - minus(k, j)) / (2.0 * h);
  }

  StateVector out(m);
  for (std::size_t k = 0; k < m; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (dxu[i] == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (dxu[j] == 0.0) continue;
        double inner = 0.0;
        for (std::size_t l = 0; l < m; ++l)
          inner += a(l, i) * (partial[j](k, l) - partial[l](k, j));
        acc += dxu[i] * dxu[j] * inner;
      }
    }
    out[k] = acc;
  }
  return out;
}

void fd_flux_jacobian(const SystemModel& model, const StateVector& u, SquareMatrix& out) {
  const std::size_t m = model.dimension();
  for (std::size_t j = 0; j < m; ++j) {
    const double h = fd_step(u[j]);
    StateVector up = u, um = u;
    up[j] += h;
    um[j] -= h;
    const StateVector fp = model.flux(up);
    const StateVector fm = model.flux(um);
    for (std::size_t k = 0; k < m; ++k) out(k, j) = (fp[k] - fm[k]) / (2.0 * h);
  }
}

SubcharReport subchar_check(const SystemModel& model, double mu,
                            std::span<const StateVector> samples) {
  SubcharReport report;
  bool first = true;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double speed = model.max_speed(samples[i]);
    const double margin = mu - speed * speed;
    if (first || margin < report.worst_margin) {
      report.worst_margin = margin;
      report.worst_sample = i;
      first = false;
    }
  }
  report.pass = !first && report.worst_margin >= 0.0;
  if (first) report.pass = true;  // vacuous on an empty sample set
  return report;
}

}  // namespace pathrelax
