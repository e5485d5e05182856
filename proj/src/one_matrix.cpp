#include <algorithm>
#include <cmath>
#include <numbers>

#include "block_qp.hpp"
#include "tmm/equilibrium.hpp"
#include "tmm/errors.hpp"

namespace tmm {

namespace {

void check_confining(const Polynomial& v) {
  if (v.degree() < 2 || v.degree() % 2 != 0 || v.leading() <= 0.0)
    throw ValidationError("V must have even degree >= 2 and positive leading coefficient");
}

detail::BlockQp one_matrix_qp(const Polynomial& v, const GridMeasure& g, Exec ex) {
  Eigen::MatrixXd h = 2.0 * self_interaction(g, ex);
  const auto vc = cell_averages(g, [&](double x) { return v(x); });
  Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(vc.data(), g.cells);
  detail::Block b;
  b.offset = 0;
  b.size = g.cells;
  b.mass = g.mass;
  return detail::BlockQp(std::move(h), std::move(c), {b});
}

// Semicircle-shaped start centred on the grid, clipped to it.
Eigen::VectorXd semicircle_start(const GridMeasure& g) {
  const double mid = 0.5 * (g.left + g.right);
  const double r = std::min(2.0, 0.4 * (g.right - g.left));
  Eigen::VectorXd x(g.cells);
  for (int i = 0; i < g.cells; ++i) {
    const double u = (g.center(i) - mid) / r;
    x[i] = u * u < 1.0 ? std::sqrt(1.0 - u * u) : 0.0;
  }
  x *= g.mass / x.sum();
  return x;
}

}  // namespace

OneMatrixSolution solve_one_matrix(const Polynomial& v, const GridMeasure& grid, int iters, double tol,
                                   const SolverOptions& opt) {
  check_confining(v);
  GridMeasure g = GridMeasure::make(grid.left, grid.right, grid.cells, grid.mass, grid.axis);
  const auto qp = one_matrix_qp(v, g, opt.exec);

  detail::QpOptions qo;
  qo.iters = iters;
  qo.tol = tol;
  qo.coarse_tol = opt.coarse_tol;
  qo.polish = opt.polish;
  qo.check_monotone = opt.check_monotone;
  qo.exec = opt.exec;
  if (opt.check_convexity && qp.min_projected_eigenvalue() <= 0.0)
    throw ValidationError("interaction matrix is not positive definite on the mass-zero subspace");
  const auto r = qp.solve(semicircle_start(g), qo);

  g.set_masses(std::vector<double>(r.x.data(), r.x.data() + r.x.size()));
  const int n = g.cells;
  if (r.x[0] + r.x[1] > 1e-6 || r.x[n - 1] + r.x[n - 2] > 1e-6)
    throw GridTooNarrow("density does not vanish at the grid ends; widen [" + std::to_string(g.left) + ", " +
                        std::to_string(g.right) + "]");
  if (r.residual[0] > tol)
    throw NotConverged("one-matrix solve: residual " + std::to_string(r.residual[0]) + " after " +
                       std::to_string(r.iterations) + " iterations");

  OneMatrixSolution s;
  s.v = v;
  s.measure = g;
  s.support_intervals = support_intervals(g, opt.support_threshold);
  s.ell = r.ell[0];
  s.residual = r.residual[0];
  s.energy = r.energy;
  s.iterations = r.iterations;
  return s;
}

double one_matrix_residual(const Polynomial& v, const GridMeasure& mu, double* ell_out) {
  mu.validate();
  const auto qp = one_matrix_qp(v, mu, Exec::Parallel);
  const auto m = mu.masses();
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(m.data(), mu.cells);
  std::vector<double> ell, res;
  qp.residuals(x, qp.gradient(x, Exec::Parallel), ell, res);
  if (ell_out) *ell_out = ell[0];
  return res[0];
}

Polynomial contract_moments(const Polynomial& v, const GridMeasure& mu) {
  const Polynomial dv = v.derivative();
  const int d = dv.degree();
  if (d < 1) return Polynomial{};
  std::vector<double> mom(d);
  for (int k = 0; k < d; ++k) mom[k] = mu.moment(k);
  std::vector<double> q(d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j <= d; ++j) q[i] += dv.coeff(j) * mom[j - 1 - i];
  return Polynomial(q);
}

DensityCheck density_from_curve(const Polynomial& v, const GridMeasure& mu, double threshold) {
  DensityCheck out;
  out.q = contract_moments(v, mu);
  const Polynomial dv = v.derivative();
  out.r = dv * dv * 0.25 - out.q;
  const double cut = threshold * mu.max_density();
  for (int i = 0; i < mu.cells; ++i) {
    if (mu.density[i] <= cut || mu.density[i] == 0.0) continue;
    // cell average of sqrt(R_-)/pi, composite Gauss so the edge kink is resolved
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
    const int sub = 16;
    const double hs = mu.width() / sub;
    double rho = 0.0;
    for (int p = 0; p < sub; ++p)
      for (int k = 0; k < 4; ++k) {
        const double rv = out.r(mu.edge(i) + hs * (p + 0.5 + 0.5 * gx[k]));
        if (rv < 0.0) rho += gw[k] * std::sqrt(-rv);
      }
    rho /= 2.0 * sub * std::numbers::pi;
    out.gap = std::max(out.gap, std::abs(rho - mu.density[i]));
  }
  return out;
}

}  // namespace tmm
