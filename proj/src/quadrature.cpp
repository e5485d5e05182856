#include "tmm/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "tmm/errors.hpp"

namespace tmm {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ValidationError("gauss_legendre: n must be >= 1");
  QuadratureRule r;
  r.kind = "gauss-legendre";
  r.nodes.resize(n);
  r.weights.resize(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = mid - half * x;
    r.nodes[n - 1 - i] = mid + half * x;
    r.weights[i] = r.weights[n - 1 - i] = half * w;
  }
  return r;
}

QuadratureRule tanh_sinh(int level, double a, double b, double tmax) {
  QuadratureRule r;
  r.kind = "tanh-sinh";
  const double h = std::ldexp(1.0, -level);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  const int m = static_cast<int>(std::ceil(tmax / h));
  for (int k = -m; k <= m; ++k) {
    const double t = k * h;
    const double s = 0.5 * std::numbers::pi * std::sinh(t);
    const double x = std::tanh(s);
    const double c = std::cosh(s);
    const double w = h * 0.5 * std::numbers::pi * std::cosh(t) / (c * c);
    if (std::abs(x) >= 1.0 || w == 0.0) continue;
    r.nodes.push_back(mid + half * x);
    r.weights.push_back(half * w);
  }
  return r;
}

QuadratureRule composite_gauss_legendre(const std::vector<double>& edges, int n) {
  QuadratureRule r;
  r.kind = "gauss-legendre";
  const auto ref = gauss_legendre(n);
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double half = 0.5 * (edges[p + 1] - edges[p]), mid = 0.5 * (edges[p + 1] + edges[p]);
    for (int i = 0; i < n; ++i) {
      r.nodes.push_back(mid + half * ref.nodes[i]);
      r.weights.push_back(half * ref.weights[i]);
    }
  }
  return r;
}

}  // namespace tmm
