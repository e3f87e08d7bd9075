#include "pathrelax/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "pathrelax/errors.hpp"

namespace pathrelax {

namespace {

// Legendre P_n(x) and derivative via the three-term recurrence.
struct LegendreEval {
  double p;   // P_n
  double dp;  // P_n'
};

LegendreEval legendre(std::size_t n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (std::size_t k = 1; k < n; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1), valid away from the endpoints.
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

Quadrature gauss_lobatto_5() {
  const double t = std::sqrt(3.0 / 7.0);
  Quadrature q;
  q.nodes = {0.0, 0.5 * (1.0 - t), 0.5, 0.5 * (1.0 + t), 1.0};
  q.weights = {1.0 / 20.0, 49.0 / 180.0, 16.0 / 45.0, 49.0 / 180.0, 1.0 / 20.0};
  return q;
}

Quadrature gauss_lobatto(std::size_t n) {
  if (n < 2) throw InvalidParam("gauss_lobatto: need at least 2 nodes");
  const std::size_t deg = n - 1;  // interior nodes are roots of P'_{deg}

  std::vector<double> x(n), w(n);
  x.front() = -1.0;
  x.back() = 1.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    // Chebyshev-like initial guess, then Newton on P'_{deg} using
    // P'' = (2 x P' - deg (deg + 1) P) / (1 - x^2).
    double xi = std::cos(std::numbers::pi * static_cast<double>(k) / deg);
    xi = -xi;  // ascending order
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(deg, xi);
      const double d2p = (2.0 * xi * dp - deg * (deg + 1.0) * p) / (1.0 - xi * xi);
      const double step = dp / d2p;
      xi -= step;
      if (std::fabs(step) < 1e-16) break;
    }
    x[k] = xi;
  }
  const double endpoint_weight = 2.0 / (deg * (deg + 1.0));
  for (std::size_t k = 0; k < n; ++k) {
    const double p = legendre(deg, x[k]).p;
    w[k] = (k == 0 || k + 1 == n) ? endpoint_weight : endpoint_weight / (p * p);
  }

  // Map [-1, 1] to [0, 1].
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    q.nodes[k] = 0.5 * (x[k] + 1.0);
    q.weights[k] = 0.5 * w[k];
  }
  return q;
}

}  // namespace pathrelax
