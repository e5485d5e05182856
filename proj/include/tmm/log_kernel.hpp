#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "tmm/grid_measure.hpp"

namespace tmm {

// Execution policy for the assembly and mat-vec kernels. Serial is the
// reference path; Parallel uses OpenMP and must agree to rounding.
enum class Exec { Serial, Parallel };

// Cell-averaged log(1/|x-y|) between cells i and j of one uniform grid,
// from the closed-form double integral of log|x-y| over two intervals.
Eigen::MatrixXd self_interaction(const GridMeasure& g, Exec ex = Exec::Parallel);

// Cell-averaged log(1/|x - i t|) between real cells x_i and imaginary cells
// t_j, 2x2-point Gauss per cell pair.
Eigen::MatrixXd cross_interaction(const GridMeasure& real_grid, const GridMeasure& imag_grid,
                                  Exec ex = Exec::Parallel);

Eigen::VectorXd matvec(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, Exec ex = Exec::Parallel);

// 4-point Gauss-Legendre cell averages of f.
std::vector<double> cell_averages(const GridMeasure& g, const std::function<double(double)>& f);

}  // namespace tmm
