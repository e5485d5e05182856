#include "tmm/log_kernel.hpp"

#include <cmath>

namespace tmm {

namespace {

// Antiderivative pair: G'' = log|u|.
long double big_g(long double u) {
  if (u == 0.0L) return 0.0L;
  return u * u * (0.5L * std::log(std::fabs(u)) - 0.75L);
}

}  // namespace

Eigen::MatrixXd self_interaction(const GridMeasure& g, Exec ex) {
  const int n = g.cells;
  const long double h = g.width();
  std::vector<double> toe(n);
  for (int k = 0; k < n; ++k) {
    const long double val = big_g((k + 1) * h) - 2.0L * big_g(k * h) + big_g((k - 1) * h);
    toe[k] = static_cast<double>(-val / (h * h));
  }
  Eigen::MatrixXd a(n, n);
  if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) a(i, j) = toe[std::abs(i - j)];
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) a(i, j) = toe[std::abs(i - j)];
  }
  return a;
}

Eigen::MatrixXd cross_interaction(const GridMeasure& rg, const GridMeasure& ig, Exec ex) {
  const int n = rg.cells, m = ig.cells;
  const double g = 0.5 / std::sqrt(3.0);
  const double hx = rg.width(), ht = ig.width();
  auto entry = [&](int i, int j) {
    const double xc = rg.center(i), tc = ig.center(j);
    double s = 0.0;
    for (double a : {-g, g})
      for (double b : {-g, g}) {
        const double x = xc + a * hx, t = tc + b * ht;
        s += -0.5 * std::log(x * x + t * t);
      }
    return 0.25 * s;
  };
  Eigen::MatrixXd b(n, m);
  if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) b(i, j) = entry(i, j);
  } else {
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) b(i, j) = entry(i, j);
  }
  return b;
}

Eigen::VectorXd matvec(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, Exec ex) {
  const int n = static_cast<int>(a.rows()), m = static_cast<int>(a.cols());
  Eigen::VectorXd y(n);
  if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += a(i, j) * x[j];
      y[i] = s;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += a(i, j) * x[j];
      y[i] = s;
    }
  }
  return y;
}

std::vector<double> cell_averages(const GridMeasure& g, const std::function<double(double)>& f) {
  static const double xn[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
  static const double wn[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
  std::vector<double> out(g.cells);
  const double h = g.width();
  for (int i = 0; i < g.cells; ++i) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += wn[k] * f(g.center(i) + 0.5 * h * xn[k]);
    out[i] = 0.5 * s;
  }
  return out;
}

}  // namespace tmm
