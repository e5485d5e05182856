#include <algorithm>
#include <cmath>

#include "tmm/equilibrium.hpp"

namespace tmm {

namespace {

// Root of a least-squares line through density^2 over `k` cells starting at
// cell i0 and stepping by dir (+1 inward from a left edge, -1 from a right
// edge). Returns `fallback` if the fit is unusable or moves too far.
double refine_edge(const std::vector<double>& rho, const GridMeasure& g, int i0, int dir, double fallback) {
  const int k = 6;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int j = 0; j < k; ++j) {
    const int i = i0 + dir * j;
    if (i < 0 || i >= g.cells) break;
    const double x = g.center(i), y = rho[i] * rho[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt < 3) return fallback;
  const double den = cnt * sxx - sx * sx;
  if (den == 0.0) return fallback;
  const double slope = (cnt * sxy - sx * sy) / den;
  const double icpt = (sy - slope * sx) / cnt;
  if (slope == 0.0 || (slope > 0.0) != (dir > 0)) return fallback;
  const double root = -icpt / slope;
  return std::abs(root - fallback) <= 2.0 * g.width() ? root : fallback;
}

// Intervals where rho > cut, refined at every edge.
std::vector<std::array<double, 2>> intervals_of(const std::vector<double>& rho, const GridMeasure& g, double cut) {
  std::vector<std::array<double, 2>> out;
  int i = 0;
  while (i < g.cells) {
    if (rho[i] <= cut) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < g.cells && rho[j + 1] > cut) ++j;
    double lo = g.edge(i), hi = g.edge(j + 1);
    if (i > 0) lo = refine_edge(rho, g, i, +1, lo);
    if (j + 1 < g.cells) hi = refine_edge(rho, g, j, -1, hi);
    out.push_back({lo, hi});
    i = j + 1;
  }
  return out;
}

// Half-width of the gap around the origin, 0 if the origin is covered.
double inner_gap(const std::vector<std::array<double, 2>>& iv) {
  double gap = 1e300;
  for (const auto& in : iv) {
    if (in[0] < 0.0 && in[1] > 0.0) return 0.0;
    gap = std::min(gap, std::min(std::abs(in[0]), std::abs(in[1])));
  }
  return iv.empty() ? 0.0 : gap;
}

}  // namespace

std::vector<std::array<double, 2>> support_intervals(const GridMeasure& mu, double threshold) {
  return intervals_of(mu.density, mu, threshold * mu.max_density());
}

Endpoints extract_supports(const VectorEquilibriumSolution& sol, double threshold) {
  Endpoints e;
  const auto s1 = support_intervals(sol.mu1, threshold);
  if (!s1.empty()) e.a = std::max(std::abs(s1.front()[0]), std::abs(s1.back()[1]));
  e.c1 = inner_gap(s1);
  e.c3 = inner_gap(support_intervals(sol.mu3, threshold));

  // S(sigma2 - mu2) lies outside (-c2, c2) on the imaginary axis.
  const auto& g2 = sol.mu2;
  std::vector<double> free(g2.cells, 0.0);
  double top = 0.0;
  for (int i = 0; i < g2.cells; ++i) {
    const double s = sol.sigma2_mass.empty() ? 0.0 : sol.sigma2_mass[i] / g2.width();
    free[i] = std::max(s - g2.density[i], 0.0);
    top = std::max(top, free[i]);
  }
  e.c2 = inner_gap(intervals_of(free, g2, threshold * top));
  return e;
}

double fitted_exponent(const GridMeasure& mu, double x0, double dmin, double dmax, int side) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int i = 0; i < mu.cells; ++i) {
    const double dx = mu.center(i) - x0;
    if ((side > 0 && dx < 0) || (side < 0 && dx > 0)) continue;
    const double d = std::abs(dx);
    if (d < dmin || d > dmax || mu.density[i] <= 0.0) continue;
    const double lx = std::log(d), ly = std::log(mu.density[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt < 2) return std::nan("");
  return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

std::vector<Singularity> detect_singularity(const OneMatrixSolution& sol) {
  std::vector<Singularity> out;
  const auto& mu = sol.measure;
  const double h = mu.width();
  const double top = mu.max_density();
  const auto iv = sol.support_intervals.empty() ? support_intervals(mu) : sol.support_intervals;
  if (iv.empty()) return out;

  // A gap between support intervals is genuine only if the density really
  // vanishes there; otherwise it is the threshold cutting through a zero.
  auto gap_open = [&](std::size_t k) {
    int zeros = 0;
    for (int i = 0; i < mu.cells; ++i) {
      const double x = mu.center(i);
      if (x > iv[k][1] && x < iv[k + 1][0] && mu.density[i] <= 1e-10 * top) ++zeros;
    }
    return zeros >= 3;
  };

  // Interior zeros: deep local minima inside the convex hull of the support.
  const double lo = iv.front()[0], hi = iv.back()[1];
  const double span = hi - lo;
  for (int i = 1; i + 1 < mu.cells; ++i) {
    const double x = mu.center(i);
    if (x - lo < 0.1 * span || hi - x < 0.1 * span) continue;
    const double r = mu.density[i];
    const double a = mu.density[i - 1], c = mu.density[i + 1];
    // ties allowed: a symmetric zero sits on the edge between two equal cells
    if (!(r <= a && r <= c && (r < a || r < c))) continue;
    if (r > 1e-2 * top) continue;
    const double den = a - 2.0 * r + c;
    const double x0 = den > 0.0 ? x + 0.5 * h * (a - c) / den : x;
    if (!out.empty() && std::abs(out.back().location - x0) < 2.0 * h) continue;
    bool in_open_gap = false;
    for (std::size_t k = 0; k + 1 < iv.size(); ++k)
      if (x0 > iv[k][1] && x0 < iv[k + 1][0] && gap_open(k)) in_open_gap = true;
    if (in_open_gap) continue;
    const double e = fitted_exponent(mu, x0, 4.0 * h, std::min(0.1 * span, 40.0 * h));
    if (e > 1.0) out.push_back({x0, "interior", e});
  }

  // Endpoints: flag as singular when the local exponent is 2m + 1/2, m >= 1.
  for (std::size_t k = 0; k < iv.size(); ++k) {
    const double len = iv[k][1] - iv[k][0];
    const double dmax = std::min(0.15 * len, 40.0 * h);
    for (int side : {+1, -1}) {
      const double x0 = side > 0 ? iv[k][0] : iv[k][1];
      if ((side > 0 && k > 0 && !gap_open(k - 1)) || (side < 0 && k + 1 < iv.size() && !gap_open(k)))
        continue;
      const double e = fitted_exponent(mu, x0, 3.0 * h, dmax, side);
      if (e > 1.5) out.push_back({x0, "endpoint", e});
    }
  }

  // Exterior: the variational inequality becomes tight away from the support.
  if (!sol.v.is_zero()) {
    double ell = 0.0;
    one_matrix_residual(sol.v, mu, &ell);
    const auto vc = cell_averages(mu, [&](double x) { return sol.v(x); });
    const Eigen::MatrixXd a = self_interaction(mu);
    const auto m = mu.masses();
    const Eigen::VectorXd g =
        2.0 * matvec(a, Eigen::Map<const Eigen::VectorXd>(m.data(), mu.cells)) +
        Eigen::Map<const Eigen::VectorXd>(vc.data(), mu.cells);
    const double gscale = std::max(1.0, std::abs(ell));
    for (int i = 1; i + 1 < mu.cells; ++i) {
      const double x = mu.center(i);
      double dist = 1e300;
      for (const auto& in : iv) {
        if (x >= in[0] && x <= in[1]) dist = 0.0;
        else dist = std::min(dist, std::min(std::abs(x - in[0]), std::abs(x - in[1])));
      }
      if (dist < 10.0 * h) continue;
      const double d = g[i] - ell;
      if (d <= g[i - 1] - ell && d < g[i + 1] - ell && d < 1e-4 * gscale) out.push_back({x, "exterior", 0.0});
    }
  }
  return out;
}

nlohmann::json to_json(const GridMeasure& g) {
  return {{"left", g.left}, {"right", g.right}, {"cells", g.cells}, {"axis", to_string(g.axis)}, {"mass", g.mass}};
}

nlohmann::json to_json(const OneMatrixSolution& s) {
  nlohmann::json iv = nlohmann::json::array();
  for (const auto& in : s.support_intervals) iv.push_back({in[0], in[1]});
  nlohmann::json ep = nlohmann::json::object();
  if (!s.support_intervals.empty()) {
    ep["a"] = std::max(std::abs(s.support_intervals.front()[0]), std::abs(s.support_intervals.back()[1]));
    ep["intervals"] = iv;
  }
  return {{"grid", to_json(s.measure)},
          {"density", s.measure.density},
          {"endpoints", ep},
          {"residuals", {s.residual}},
          {"ell", s.ell},
          {"energy", s.energy},
          {"iterations", s.iterations}};
}

nlohmann::json to_json(const VectorEquilibriumSolution& s) {
  return {{"alpha", s.alpha},
          {"tau", s.tau},
          {"grid", {{"mu1", to_json(s.mu1)}, {"mu2", to_json(s.mu2)}, {"mu3", to_json(s.mu3)}}},
          {"density", {{"mu1", s.mu1.density}, {"mu2", s.mu2.density}, {"mu3", s.mu3.density}}},
          {"endpoints",
           {{"a", s.endpoints.a}, {"c1", s.endpoints.c1}, {"c2", s.endpoints.c2}, {"c3", s.endpoints.c3}}},
          {"residuals", {s.residuals[0], s.residuals[1], s.residuals[2]}},
          {"regular", s.regular},
          {"energy", s.energy},
          {"iterations", s.iterations}};
}

}  // namespace tmm
