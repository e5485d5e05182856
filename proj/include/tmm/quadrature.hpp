#pragma once

#include <string>
#include <vector>

namespace tmm {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::string kind;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// n-point Gauss-Legendre rule on [a, b]; exact for degree 2n-1.
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Tanh-sinh (double exponential) rule on [a, b] with step h = 2^-level over
// |t| <= tmax.
QuadratureRule tanh_sinh(int level, double a = -1.0, double b = 1.0, double tmax = 3.5);

// Concatenation of an n-point Gauss-Legendre rule on each panel
// [edges[i], edges[i+1]].
QuadratureRule composite_gauss_legendre(const std::vector<double>& edges, int n);

}  // namespace tmm
