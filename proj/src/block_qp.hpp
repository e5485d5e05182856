#pragma once

// Convex quadratic program shared by the one-matrix and vector equilibrium
// solvers: minimize x'Hx/2 + c'x with per-block mass constraints and cellwise
// bounds 0 <= x <= upper.

#include <Eigen/Dense>
#include <array>
#include <limits>
#include <vector>

#include "tmm/log_kernel.hpp"

namespace tmm::detail {

struct Block {
  int offset = 0;
  int size = 0;
  double mass = 1.0;
  std::vector<double> upper;  // empty: no upper bound
};

struct QpOptions {
  int iters = 20000;
  double tol = 1e-6;
  double coarse_tol = 1e-3;
  bool polish = true;
  bool check_monotone = true;
  int check_every = 25;
  Exec exec = Exec::Parallel;
};

struct QpResult {
  Eigen::VectorXd x;
  Eigen::VectorXd grad;
  std::vector<double> ell;
  std::vector<double> residual;
  double energy = 0.0;
  int iterations = 0;
  bool polished = false;
};

class BlockQp {
 public:
  BlockQp(Eigen::MatrixXd h, Eigen::VectorXd c, std::vector<Block> blocks);

  double energy(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x, Exec ex) const;
  Eigen::VectorXd project(const Eigen::VectorXd& y) const;

  // Per-block Lagrange level and complementary-slackness residual at x.
  void residuals(const Eigen::VectorXd& x, const Eigen::VectorXd& g, std::vector<double>& ell,
                 std::vector<double>& res) const;

  // Smallest eigenvalue of H restricted to the per-block zero-sum subspace.
  double min_projected_eigenvalue() const;

  QpResult solve(const Eigen::VectorXd& x0, const QpOptions& opt) const;

 private:
  bool polish(Eigen::VectorXd& x) const;
  // Monotone FISTA from x until the residual is <= tol or `iters` steps.
  int descend(Eigen::VectorXd& x, double& fx, int iters, double tol, const QpOptions& opt) const;

  Eigen::MatrixXd h_;
  Eigen::VectorXd c_;
  std::vector<Block> blocks_;
};

// Euclidean projection of y onto {0 <= x <= u, sum x = mass}; u may be empty.
void project_box_simplex(const double* y, int n, const std::vector<double>& u, double mass, double* out);

}  // namespace tmm::detail
