#pragma once

#include <cstddef>
#include <vector>

namespace pathrelax {

// Quadrature rule on the unit interval [0, 1]. Weights sum to one.
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

// The five-point Gauss-Lobatto rule on [0, 1], exact through degree 7.
// Nodes and weights are hard-coded; the general constructor below reproduces
// them and the unit tests cross-check both.
Quadrature gauss_lobatto_5();

// Gauss-Lobatto rule with n >= 2 nodes on [0, 1], exact through degree 2n - 3.
// Interior nodes are the roots of P'_{n-1}, found by Newton iteration on the
// Legendre recurrence.
Quadrature gauss_lobatto(std::size_t n);

}  // namespace pathrelax
