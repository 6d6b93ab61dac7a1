#pragma once

#include <vector>

namespace igaplate {

struct GaussRule {
  std::vector<double> points;   // on [-1, 1]
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
const GaussRule& gauss_legendre(int n);

// Rule mapped to [a, b].
GaussRule gauss_on_interval(int n, double a, double b);

}  // namespace igaplate
