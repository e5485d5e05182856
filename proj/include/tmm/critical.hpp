#pragma once

#include <optional>
#include <vector>

#include "tmm/polynomial.hpp"

namespace tmm {

struct PotentialPair {
  Polynomial v;
  Polynomial w;
  double tau = 1.0;
  double scale = 1.0;

  // Throws ValidationError unless V, W are even-degree with positive leading
  // coefficients and tau, scale are positive.
  void validate() const;
  // Coupled quartic model: V = x^2/2, W = y^4/4 + (alpha/2) y^2.
  static PotentialPair quartic(double alpha, double tau);
  // Recovers alpha from a W of the form y^4/4 + (alpha/2) y^2; throws otherwise.
  double quartic_alpha() const;
};

// Stationary points of s -> W(s) - tau*x*s for W = s^4/4 + (alpha/2) s^2.
// s1 is the global minimizer, s2 the secondary minimizer and s3 the local
// maximizer between them. At the symmetric tie x = 0, alpha < 0 the positive
// minimizer is reported as s1.
struct CriticalPoints {
  double s1 = 0.0;
  std::optional<double> s2;
  std::optional<double> s3;
};

// Real roots of a3 s^3 + a1 s + a0 in ascending order, repeated roots listed
// once per multiplicity.
std::vector<double> cubic_real_roots(double a3, double a1, double a0);

// Half-width of the x-interval on which s2, s3 exist: (2/tau)(-alpha/3)^{3/2}
// for alpha < 0, and 0 otherwise.
double secondary_minimum_bound(double alpha, double tau);

CriticalPoints critical_points(double x, double alpha, double tau);

double external_field_v1(double x, const PotentialPair& pp);
double external_field_v3(double x, const PotentialPair& pp);

// Density of the constraint measure on the imaginary axis, z = i t.
double sigma2_density(double t, double alpha, double tau);

}  // namespace tmm
