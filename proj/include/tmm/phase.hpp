#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "json.hpp"

#include "tmm/equilibrium.hpp"
#include "tmm/grid_measure.hpp"
#include "tmm/polynomial.hpp"

namespace tmm {

enum class Phase { I, II, III, IV, BoundaryParabola, BoundaryHyperbola, Multicritical };

std::string to_string(Phase p);

struct PhasePoint {
  double alpha = 0.0;
  double tau = 1.0;
  Phase phase = Phase::I;
};

// Regions of the (alpha, tau) plane cut out by tau^2 = alpha + 2 and
// alpha tau^2 = -1. The two components of {alpha tau^2 > -1, tau^2 > alpha+2}
// lie on either side of tau = 1.
PhasePoint classify_phase(double alpha, double tau, double tol = 1e-9);

// W(y) - tau^2 y^2 / 2.
Polynomial w_effective(const Polynomial& w, double tau);

// sqrt(-W_eff''(0)/2); throws NonNegativeSecondDerivative.
double tau_critical(const Polynomial& w_eff);

// sum c[i][j] x^i xi^j
class BivariateCurve {
 public:
  BivariateCurve() = default;
  explicit BivariateCurve(std::vector<std::vector<double>> c);

  const std::vector<std::vector<double>>& coeffs() const { return c_; }
  double coeff(int i, int j) const;
  int degree_x() const { return static_cast<int>(c_.size()) - 1; }
  int degree_xi() const;

  std::complex<double> operator()(std::complex<double> x, std::complex<double> xi) const;
  // Sum of |terms| at (x, xi), the natural scale for a residual.
  double magnitude(std::complex<double> x, std::complex<double> xi) const;
  // Polynomial in xi at fixed real x.
  Polynomial at_x(double x) const;
  double max_abs_coeff() const;
  // Divided by the coefficient of the highest xi power at x^0.
  BivariateCurve normalized() const;
  double max_coeff_gap(const BivariateCurve& o) const;

 private:
  void trim();
  std::vector<std::vector<double>> c_;
};

BivariateCurve operator*(const BivariateCurve& a, const BivariateCurve& b);
BivariateCurve operator-(const BivariateCurve& a, const BivariateCurve& b);

// tau (x - tau xi)(W_eff'(xi) + tau^2 xi - tau x) - Q(xi), with Q the moment
// contraction of W_eff against mu.
BivariateCurve spectral_curve_quadratic_v(const Polynomial& w, double tau, const GridMeasure& mu);
// Same with Q built from given moments M_0, M_1, ...
BivariateCurve spectral_curve_from_moments(const Polynomial& w, double tau, const std::vector<double>& moments);

// Moments of the equilibrium measure of v, Richardson-extrapolated from solves
// with h and h/2, on grids shifted so the outer support edges sit on cell
// edges. `grid` sets h and the outer interval.
std::vector<double> extrapolated_moments(const Polynomial& v, const GridMeasure& grid, int count);

// Largest m with |d^j/dxi^j curve(x0, xi0)| <= tol * max|coeff| for j < m.
int root_multiplicity(const BivariateCurve& curve, double x0, double xi0, double tol = 1e-6);
// The derivatives used above, j = 0..count-1.
std::vector<double> xi_derivatives(const BivariateCurve& curve, double x0, double xi0, int count);

// V'(z) - int dmu(s)/(z - s), 4-point Gauss per cell. Throws
// TooCloseToSupport within two cells of the support.
std::complex<double> xi_from_mu1(std::complex<double> z, const Polynomial& v, const GridMeasure& mu1);

struct Cut {
  Axis axis = Axis::Real;
  double lo = 0.0;
  double hi = 0.0;
};

struct SheetStructure {
  std::array<std::vector<Cut>, 4> sheets;
};

SheetStructure sheet_structure(const VectorEquilibriumSolution& sol, double threshold = 1e-3);

// Named potentials: 1, 2 (as given), 2c (coefficient consistent with the
// reference curve), 3.
struct CurveExample {
  std::string name;
  Polynomial w;
  double tau = 1.0;
  double x0 = 0.0;
  double xi0 = 0.0;
  GridMeasure grid;
};
CurveExample curve_example(const std::string& name, double tau);
CurveExample curve_example(const std::string& name);
// Reference quartic for Example 3 at tau = sqrt(5)/5, and xi^4 - x xi^3 + x^2.
BivariateCurve example3_reference_curve();
BivariateCurve multicritical_reference_curve();

nlohmann::json to_json(const BivariateCurve& c);
nlohmann::json to_json(const SheetStructure& s);

}  // namespace tmm
