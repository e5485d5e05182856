#include "tmm/grid_measure.hpp"

#include <algorithm>
#include <cmath>

#include "tmm/errors.hpp"

namespace tmm {

std::string to_string(Axis a) { return a == Axis::Real ? "real" : "imaginary"; }

GridMeasure GridMeasure::make(double left, double right, int cells, double mass, Axis axis) {
  GridMeasure g;
  g.left = left;
  g.right = right;
  g.cells = cells;
  g.mass = mass;
  g.axis = axis;
  g.density.assign(cells, 0.0);
  g.validate();
  return g;
}

void GridMeasure::validate() const {
  if (!(right > left)) throw ValidationError("grid: right must exceed left");
  if (cells < 2) throw ValidationError("grid: need at least 2 cells");
  if (static_cast<int>(density.size()) != cells) throw ValidationError("grid: density length differs from cell count");
}

double GridMeasure::total_mass() const {
  double s = 0.0;
  for (double d : density) s += d;
  return s * width();
}

double GridMeasure::max_density() const {
  return density.empty() ? 0.0 : *std::max_element(density.begin(), density.end());
}

double GridMeasure::moment(int k) const {
  double s = 0.0;
  const double h = width();
  for (int i = 0; i < cells; ++i) {
    if (density[i] == 0.0) continue;
    const double a = edge(i), b = a + h;
    s += density[i] * (std::pow(b, k + 1) - std::pow(a, k + 1)) / (k + 1);
  }
  return s;
}

std::vector<double> GridMeasure::masses() const {
  std::vector<double> m(density);
  const double h = width();
  for (auto& v : m) v *= h;
  return m;
}

void GridMeasure::set_masses(const std::vector<double>& m) {
  const double h = width();
  density.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) density[i] = m[i] / h;
}

}  // namespace tmm
