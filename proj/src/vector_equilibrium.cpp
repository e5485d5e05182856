#include <algorithm>
#include <cmath>

#include "block_qp.hpp"
#include "tmm/equilibrium.hpp"
#include "tmm/errors.hpp"

namespace tmm {

VectorGrids VectorGrids::defaults() {
  return {GridMeasure::make(-6.0, 6.0, 400, 1.0), GridMeasure::make(-8.0, 8.0, 400, 2.0 / 3.0, Axis::Imaginary),
          GridMeasure::make(-8.0, 8.0, 400, 1.0 / 3.0)};
}

VectorGrids VectorGrids::wide(double half, int cells, double mu1_half, int mu1_cells) {
  return {GridMeasure::make(-mu1_half, mu1_half, mu1_cells, 1.0),
          GridMeasure::make(-half, half, cells, 2.0 / 3.0, Axis::Imaginary),
          GridMeasure::make(-half, half, cells, 1.0 / 3.0)};
}

namespace {

struct Assembly {
  GridMeasure g1, g2, g3;
  std::vector<double> v1, v3, sigma2;  // cell averages of the fields, sigma2 cell masses
  Eigen::MatrixXd h;
  Eigen::VectorXd c;
  std::vector<detail::Block> blocks;
};

std::vector<double> to_std(const Eigen::VectorXd& v, int off, int n) {
  return std::vector<double>(v.data() + off, v.data() + off + n);
}

Assembly assemble(double alpha, double tau, const Polynomial& v, const GridMeasure& t1, const GridMeasure& t2,
                  const GridMeasure& t3, Exec ex) {
  Assembly a;
  a.g1 = GridMeasure::make(t1.left, t1.right, t1.cells, 1.0, Axis::Real);
  a.g2 = GridMeasure::make(t2.left, t2.right, t2.cells, 2.0 / 3.0, Axis::Imaginary);
  a.g3 = GridMeasure::make(t3.left, t3.right, t3.cells, 1.0 / 3.0, Axis::Real);
  PotentialPair pp{v, quartic_potential(alpha), tau, 1.0};
  pp.validate();
  if (!v.is_even()) throw ValidationError("V must be even");

  a.v1 = cell_averages(a.g1, [&](double x) { return external_field_v1(x, pp); });
  a.v3 = cell_averages(a.g3, [&](double x) { return external_field_v3(x, pp); });
  a.sigma2 = cell_averages(a.g2, [&](double t) { return sigma2_density(t, alpha, tau); });
  for (auto& s : a.sigma2) s *= a.g2.width();
  double smass = 0.0;
  for (double s : a.sigma2) smass += s;
  if (smass < 2.0 / 3.0)
    throw InfeasibleConstraint("sigma2 carries mass " + std::to_string(smass) +
                               " < 2/3 on the mu2 grid; enlarge the grid");

  const int n1 = a.g1.cells, n2 = a.g2.cells, n3 = a.g3.cells, n = n1 + n2 + n3;
  const Eigen::MatrixXd b12 = cross_interaction(a.g1, a.g2, ex);
  const Eigen::MatrixXd b32 = cross_interaction(a.g3, a.g2, ex);
  a.h = Eigen::MatrixXd::Zero(n, n);
  a.h.block(0, 0, n1, n1) = 2.0 * self_interaction(a.g1, ex);
  a.h.block(n1, n1, n2, n2) = 2.0 * self_interaction(a.g2, ex);
  a.h.block(n1 + n2, n1 + n2, n3, n3) = 2.0 * self_interaction(a.g3, ex);
  a.h.block(0, n1, n1, n2) = -b12;
  a.h.block(n1, 0, n2, n1) = -b12.transpose();
  a.h.block(n1, n1 + n2, n2, n3) = -b32.transpose();
  a.h.block(n1 + n2, n1, n3, n2) = -b32;

  a.c = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n1; ++i) a.c[i] = a.v1[i];
  for (int i = 0; i < n3; ++i) a.c[n1 + n2 + i] = a.v3[i];

  a.blocks = {{0, n1, 1.0, {}}, {n1, n2, 2.0 / 3.0, a.sigma2}, {n1 + n2, n3, 1.0 / 3.0, {}}};
  return a;
}

Eigen::VectorXd initial_point(const Assembly& a) {
  const int n1 = a.g1.cells, n2 = a.g2.cells, n3 = a.g3.cells;
  Eigen::VectorXd x(n1 + n2 + n3);
  // mu1: semicircle of radius 2 clipped to the grid
  const double r = std::min(2.0, 0.45 * (a.g1.right - a.g1.left));
  double s = 0.0;
  for (int i = 0; i < n1; ++i) {
    const double u = a.g1.center(i) / r;
    x[i] = u * u < 1.0 ? std::sqrt(1.0 - u * u) : 0.0;
    s += x[i];
  }
  x.head(n1) *= 1.0 / s;
  // mu2: min(sigma2, uniform), rescaled
  s = 0.0;
  for (int i = 0; i < n2; ++i) {
    x[n1 + i] = std::min(a.sigma2[i], 1.0 / n2);
    s += x[n1 + i];
  }
  if (s > 0.0) x.segment(n1, n2) *= (2.0 / 3.0) / s;
  // mu3: uniform on the outer half of its grid
  const double half = 0.25 * (a.g3.right - a.g3.left);
  s = 0.0;
  for (int i = 0; i < n3; ++i) {
    x[n1 + n2 + i] = std::abs(a.g3.center(i)) >= half ? 1.0 : 0.0;
    s += x[n1 + n2 + i];
  }
  x.tail(n3) *= (1.0 / 3.0) / s;
  return x;  // the solver projects, so the mu2 box is enforced there
}

bool is_regular(const VectorEquilibriumSolution& s, const Eigen::VectorXd& grad) {
  const auto& g1 = s.mu1;
  const double top = g1.max_density();
  // strict inequality off S(mu1), a few cells away from its edges
  const auto iv = support_intervals(g1, 1e-3);
  for (int i = 0; i < g1.cells; ++i) {
    const double x = g1.center(i);
    double dist = 1e300;
    for (const auto& in : iv) {
      if (x >= in[0] && x <= in[1]) dist = 0.0;
      else dist = std::min(dist, std::min(std::abs(x - in[0]), std::abs(x - in[1])));
    }
    if (dist > 5.0 * g1.width() && grad[i] - s.ell[0] < 1e-4) return false;
  }
  // no interior zero of mu1
  for (const auto& in : iv)
    for (int i = 1; i + 1 < g1.cells; ++i) {
      const double x = g1.center(i);
      if (x - in[0] < 0.1 * (in[1] - in[0]) || in[1] - x < 0.1 * (in[1] - in[0])) continue;
      if (g1.density[i] < 1e-2 * top) return false;
    }
  // all gaps closed at once is the multicritical configuration
  const auto& e = s.endpoints;
  if (e.c1 < 2.0 * s.mu1.width() && e.c2 < 2.0 * s.mu2.width() && e.c3 < 2.0 * s.mu3.width()) return false;
  return true;
}

}  // namespace

VectorEquilibriumSolution solve_vector_equilibrium(double alpha, double tau, const Polynomial& v,
                                                   const VectorGrids& grids, int iters, double tol,
                                                   const SolverOptions& opt) {
  const auto a = assemble(alpha, tau, v, grids.mu1, grids.mu2, grids.mu3, opt.exec);
  detail::BlockQp qp(a.h, a.c, a.blocks);
  if (opt.check_convexity && qp.min_projected_eigenvalue() <= 0.0)
    throw ValidationError("vector interaction matrix is not positive definite on the mass-zero subspace");

  detail::QpOptions qo;
  qo.iters = iters;
  qo.tol = tol;
  qo.coarse_tol = opt.coarse_tol;
  qo.polish = opt.polish;
  qo.check_monotone = opt.check_monotone;
  qo.exec = opt.exec;
  const auto r = qp.solve(initial_point(a), qo);

  const int n1 = a.g1.cells, n2 = a.g2.cells, n3 = a.g3.cells;
  VectorEquilibriumSolution s;
  s.alpha = alpha;
  s.tau = tau;
  s.mu1 = a.g1;
  s.mu2 = a.g2;
  s.mu3 = a.g3;
  s.mu1.set_masses(to_std(r.x, 0, n1));
  s.mu2.set_masses(to_std(r.x, n1, n2));
  s.mu3.set_masses(to_std(r.x, n1 + n2, n3));
  s.sigma2_mass = a.sigma2;
  for (int k = 0; k < 3; ++k) {
    s.residuals[k] = r.residual[k];
    s.ell[k] = r.ell[k];
  }
  s.energy = r.energy;
  s.iterations = r.iterations;

  if (r.x[0] + r.x[1] > 1e-6 || r.x[n1 - 1] + r.x[n1 - 2] > 1e-6)
    throw GridTooNarrow("mu1 does not vanish at the grid ends; widen its grid");
  const double worst = *std::max_element(r.residual.begin(), r.residual.end());
  if (worst > tol)
    throw NotConverged("vector equilibrium: residual " + std::to_string(r.residual[0]) + "/" + std::to_string(r.residual[1]) + "/" + std::to_string(r.residual[2]) + " polished " + std::to_string(r.polished) + " after " +
                       std::to_string(r.iterations) + " iterations");

  s.endpoints = extract_supports(s, opt.support_threshold);
  s.regular = is_regular(s, r.grad);
  return s;
}

std::array<std::vector<double>, 3> effective_potentials(const VectorEquilibriumSolution& sol,
                                                        const PotentialPair& pp) {
  const auto a = assemble(pp.quartic_alpha(), pp.tau, pp.v, sol.mu1, sol.mu2, sol.mu3, Exec::Parallel);
  const int n1 = a.g1.cells, n2 = a.g2.cells, n3 = a.g3.cells;
  Eigen::VectorXd x(n1 + n2 + n3);
  const auto m1 = sol.mu1.masses(), m2 = sol.mu2.masses(), m3 = sol.mu3.masses();
  std::copy(m1.begin(), m1.end(), x.data());
  std::copy(m2.begin(), m2.end(), x.data() + n1);
  std::copy(m3.begin(), m3.end(), x.data() + n1 + n2);
  const Eigen::VectorXd g = matvec(a.h, x) + a.c;
  return {to_std(g, 0, n1), to_std(g, n1, n2), to_std(g, n1 + n2, n3)};
}

std::array<double, 3> variational_residuals(const VectorEquilibriumSolution& sol, const PotentialPair& pp) {
  const auto a = assemble(pp.quartic_alpha(), pp.tau, pp.v, sol.mu1, sol.mu2, sol.mu3, Exec::Parallel);
  detail::BlockQp qp(a.h, a.c, a.blocks);
  const int n1 = a.g1.cells, n2 = a.g2.cells, n3 = a.g3.cells;
  Eigen::VectorXd x(n1 + n2 + n3);
  const auto m1 = sol.mu1.masses(), m2 = sol.mu2.masses(), m3 = sol.mu3.masses();
  std::copy(m1.begin(), m1.end(), x.data());
  std::copy(m2.begin(), m2.end(), x.data() + n1);
  std::copy(m3.begin(), m3.end(), x.data() + n1 + n2);
  // Cells within rounding of sigma2 count as saturated.
  for (int i = 0; i < n2; ++i)
    if (x[n1 + i] >= a.sigma2[i] * (1.0 - 1e-12)) x[n1 + i] = a.sigma2[i];
  std::vector<double> ell, res;
  qp.residuals(x, qp.gradient(x, Exec::Parallel), ell, res);
  return {res[0], res[1], res[2]};
}

}  // namespace tmm
