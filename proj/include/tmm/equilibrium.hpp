#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"

#include "tmm/critical.hpp"
#include "tmm/grid_measure.hpp"
#include "tmm/log_kernel.hpp"
#include "tmm/polynomial.hpp"

namespace tmm {

struct SolverOptions {
  bool polish = true;          // active-set refinement after the gradient phase
  double coarse_tol = 1e-3;    // gradient-phase target before refinement
  bool check_monotone = true;  // throw if the energy ever increases
  bool check_convexity = false;
  double support_threshold = 1e-3;
  Exec exec = Exec::Parallel;
};

struct OneMatrixSolution {
  Polynomial v;
  GridMeasure measure;
  std::vector<std::array<double, 2>> support_intervals;
  double ell = 0.0;
  double residual = 0.0;
  double energy = 0.0;
  int iterations = 0;
};

// Minimizes I(mu) + int V dmu over mass-one densities on `grid` (its density
// is ignored). Throws GridTooNarrow, NotConverged.
OneMatrixSolution solve_one_matrix(const Polynomial& v, const GridMeasure& grid, int iters = 20000,
                                   double tol = 1e-6, const SolverOptions& opt = {});

// Sup over support cells of |2 int log(1/|x-s|) dmu(s) + V(x) - ell| combined
// with the inequality violation off the support.
double one_matrix_residual(const Polynomial& v, const GridMeasure& mu, double* ell_out = nullptr);

struct DensityCheck {
  Polynomial q;
  Polynomial r;
  double gap = 0.0;
};

// Q(x) = int (V'(x) - V'(s))/(x - s) dmu(s) by moment contraction,
// R = V'^2/4 - Q, and the sup gap between sqrt(R_-)/pi and mu's density on
// cells where mu exceeds `threshold` times its maximum.
DensityCheck density_from_curve(const Polynomial& v, const GridMeasure& mu, double threshold = 1e-3);

// Moment contraction on its own.
Polynomial contract_moments(const Polynomial& v, const GridMeasure& mu);

struct Endpoints {
  double a = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

struct VectorGrids {
  GridMeasure mu1;
  GridMeasure mu2;
  GridMeasure mu3;
  // mu1 on [-6,6], mu2 (t, z = it) and mu3 on [-8,8], 400 cells each.
  static VectorGrids defaults();
  // Same mu1 grid, mu2 and mu3 on [-half, half] with `cells` cells.
  static VectorGrids wide(double half = 128.0, int cells = 800, double mu1_half = 6.0, int mu1_cells = 400);
};

struct VectorEquilibriumSolution {
  double alpha = 0.0;
  double tau = 1.0;
  GridMeasure mu1, mu2, mu3;
  std::vector<double> sigma2_mass;  // per-cell mass of sigma2 on the mu2 grid
  Endpoints endpoints;
  std::array<double, 3> residuals{};
  std::array<double, 3> ell{};
  bool regular = true;
  double energy = 0.0;
  int iterations = 0;
};

// Minimizes the three-measure energy
//   sum I(nu_j,nu_j) - I(nu_1,nu_2) - I(nu_2,nu_3) + int V1 dnu_1 + int V3 dnu_3
// with masses 1, 2/3, 1/3 and nu_2 <= sigma2. Throws NotConverged,
// GridTooNarrow, InfeasibleConstraint.
VectorEquilibriumSolution solve_vector_equilibrium(double alpha, double tau, const Polynomial& v,
                                                   const VectorGrids& grids, int iters = 20000, double tol = 1e-6,
                                                   const SolverOptions& opt = {});

// Effective potentials (partial gradients of the energy) for a given triple.
std::array<std::vector<double>, 3> effective_potentials(const VectorEquilibriumSolution& sol, const PotentialPair& pp);

std::array<double, 3> variational_residuals(const VectorEquilibriumSolution& sol, const PotentialPair& pp);

Endpoints extract_supports(const VectorEquilibriumSolution& sol, double threshold = 1e-3);

// Disjoint sorted intervals where the density exceeds threshold * max, with
// outer edges refined by a local fit of density^2.
std::vector<std::array<double, 2>> support_intervals(const GridMeasure& mu, double threshold = 1e-3);

struct Singularity {
  double location = 0.0;
  std::string kind;  // "interior", "endpoint", "exterior"
  double exponent = 0.0;
};

// Interior zeros (exponent ~ 2m), endpoints with exponent ~ 2m + 1/2 for
// m >= 1, and exterior cells where the variational inequality is tight.
std::vector<Singularity> detect_singularity(const OneMatrixSolution& sol);

// Log-log slope of the density against distance from x0 over cells with
// distance in [dmin, dmax] on the given side (+1 right, -1 left, 0 both).
double fitted_exponent(const GridMeasure& mu, double x0, double dmin, double dmax, int side = 0);

nlohmann::json to_json(const GridMeasure& g);
nlohmann::json to_json(const OneMatrixSolution& s);
nlohmann::json to_json(const VectorEquilibriumSolution& s);

}  // namespace tmm
