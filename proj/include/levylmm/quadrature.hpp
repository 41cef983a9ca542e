#pragma once

#include <vector>

namespace levylmm {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule of order n (Newton on the Legendre recurrence).
const QuadratureRule& gauss_legendre(int n);

// Nodes/weights of gauss_legendre(n) mapped to [a, b].
QuadratureRule gauss_legendre_on(int n, double a, double b);

}  // namespace levylmm
