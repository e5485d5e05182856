#pragma once

#include <string>
#include <vector>

namespace tmm {

enum class Axis { Real, Imaginary };

std::string to_string(Axis a);

// Piecewise-constant density on `cells` uniform cells of [left, right]. For
// the imaginary axis the coordinate is t with z = i t.
struct GridMeasure {
  double left = -6.0;
  double right = 6.0;
  int cells = 400;
  std::vector<double> density;
  Axis axis = Axis::Real;
  double mass = 1.0;

  static GridMeasure make(double left, double right, int cells, double mass = 1.0, Axis axis = Axis::Real);

  double width() const { return (right - left) / cells; }
  double center(int i) const { return left + (i + 0.5) * width(); }
  double edge(int i) const { return left + i * width(); }
  double total_mass() const;
  double max_density() const;
  // Exact k-th moment of the piecewise-constant density.
  double moment(int k) const;
  // Cell masses density * width.
  std::vector<double> masses() const;
  void set_masses(const std::vector<double>& m);
  // Throws ValidationError on malformed grids.
  void validate() const;
};

}  // namespace tmm
