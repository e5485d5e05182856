#include <cmath>

#include "doctest.h"

#include "tmm/errors.hpp"
#include "tmm/phase.hpp"

using namespace tmm;

namespace {

bool cut_contains(const std::vector<Cut>& cuts, Axis axis, double x, double slack) {
  for (const auto& c : cuts)
    if (c.axis == axis && c.lo - slack <= x && x <= c.hi + slack) return true;
  return false;
}

}  // namespace

TEST_CASE("phase classification") {
  CHECK(classify_phase(2.0, 0.8).phase == Phase::I);
  CHECK(classify_phase(1.0, 3.0).phase == Phase::II);
  CHECK(classify_phase(-2.0, 3.0).phase == Phase::III);
  CHECK(classify_phase(-2.3, 0.2).phase == Phase::IV);
  CHECK(classify_phase(-1.0, 1.0).phase == Phase::Multicritical);
  CHECK(classify_phase(0.0, std::sqrt(2.0)).phase == Phase::BoundaryParabola);
  CHECK(classify_phase(-0.5, std::sqrt(2.0)).phase == Phase::BoundaryHyperbola);
  CHECK(to_string(Phase::Multicritical) == "multicritical");

  // transitions across each curve
  const double d = 1e-4;
  for (double a : {-0.5, 0.0, 1.0, 2.5}) {  // parabola, alpha > -1: I <-> II
    const double t = std::sqrt(a + 2.0);
    CHECK(classify_phase(a, t - d).phase == Phase::I);
    CHECK(classify_phase(a, t + d).phase == Phase::II);
  }
  for (double a : {-1.9, -1.5, -1.1}) {  // parabola, -2 < alpha < -1: IV <-> I
    const double t = std::sqrt(a + 2.0);
    CHECK(classify_phase(a, t + d).phase == Phase::IV);
    CHECK(classify_phase(a, t - d).phase == Phase::I);
  }
  for (double t : {1.2, 2.0, 3.0}) {  // hyperbola, tau > 1: II <-> III
    const double a = -1.0 / (t * t);
    CHECK(classify_phase(a + d, t).phase == Phase::II);
    CHECK(classify_phase(a - d, t).phase == Phase::III);
  }
  for (double t : {0.3, 0.6, 0.9}) {  // hyperbola, tau < 1: III <-> IV
    const double a = -1.0 / (t * t);
    CHECK(classify_phase(a - d, t).phase == Phase::III);
    CHECK(classify_phase(a + d, t).phase == Phase::IV);
  }
}

TEST_CASE("effective potential and critical coupling") {
  for (double tau : {0.3, 1.0, 1.7}) {
    const auto w = w_effective(Polynomial({0.0, 0.0, (tau * tau - 2.0) / 2.0, 0.0, 0.25}), tau);
    CHECK(w.coeff(2) == doctest::Approx(-1.0));
    CHECK(w.coeff(4) == doctest::Approx(0.25));
  }
  const auto w = quartic_potential(0.4);
  CHECK(w_effective(w, 0.0).coeffs() == w.coeffs());
  // round trip
  const auto back = w_effective(w_effective(w, 0.8), 0.0) + Polynomial::monomial(2, 0.32);
  CHECK(back.coeff(2) == doctest::Approx(w.coeff(2)));

  CHECK(tau_critical(Polynomial({0.0, 0.0, -1.0, 0.0, 0.25})) == doctest::Approx(1.0));
  CHECK_THROWS_AS(tau_critical(gaussian_potential()), NonNegativeSecondDerivative);

  // Example 2: W_eff independent of tau, tau_cr = 2^{-2/3}
  for (double tau : {0.5, 0.8}) {
    const auto e = curve_example("2", tau);
    const auto we = w_effective(e.w, tau);
    CHECK(we.coeff(6) == doctest::Approx(1.0 / 6.0));
    CHECK(we.coeff(4) == doctest::Approx(-std::pow(2.0, -4.0 / 3.0)));
    CHECK(we.coeff(2) == doctest::Approx(-0.5 * std::pow(2.0, -1.0 / 3.0)));
    CHECK(tau_critical(we) == doctest::Approx(std::pow(2.0, -2.0 / 3.0)));
  }
}

TEST_CASE("root multiplicity") {
  const auto mc = multicritical_reference_curve();
  CHECK(root_multiplicity(mc, 0.0, 0.0) == 4);
  // invariant under scaling of the curve
  BivariateCurve scaled({{0.0, 0.0, 0.0, 0.0, -3.0}, {0.0, 0.0, 0.0, 3.0}, {-3.0}});
  CHECK(root_multiplicity(scaled, 0.0, 0.0) == 4);
  CHECK(root_multiplicity(example3_reference_curve(), 4.0 * std::sqrt(5.0) / 5.0, 2.0) == 4);
  // semicircle curve xi^2 - x xi + 1 at a generic point
  const BivariateCurve sc({{1.0, 0.0, 1.0}, {0.0, -1.0}});
  CHECK(root_multiplicity(sc, 3.0, (3.0 + std::sqrt(5.0)) / 2.0) == 1);
  CHECK(root_multiplicity(sc, 3.0, 1.0) == 0);
  // at the branch point x = 2 the root is double
  CHECK(root_multiplicity(sc, 2.0, 1.0) == 2);
}

TEST_CASE("spectral curves from computed measures") {
  SUBCASE("Example 1 at tau = 1 is the multicritical curve") {
    const auto e = curve_example("1");
    const auto m = extrapolated_moments(w_effective(e.w, e.tau), e.grid, 3);
    const auto c = spectral_curve_from_moments(e.w, e.tau, m);
    CHECK(c.normalized().max_coeff_gap(multicritical_reference_curve().normalized()) <= 1e-3);
    CHECK(root_multiplicity(c, 0.0, 0.0) == 4);
  }
  SUBCASE("Example 3 matches the reference quartic") {
    const auto e = curve_example("3");
    const auto m = extrapolated_moments(w_effective(e.w, e.tau), e.grid, 3);
    const auto c = spectral_curve_from_moments(e.w, e.tau, m);
    CHECK(c.normalized().max_coeff_gap(example3_reference_curve().normalized()) <= 1e-3);
    CHECK(root_multiplicity(c, e.x0, e.xi0) == 4);
  }
  SUBCASE("tau = 0: the curve reduces to -Q") {
    const auto w = Polynomial({0.0, 0.0, -1.0, 0.0, 0.25});
    const auto s = solve_one_matrix(w, GridMeasure::make(-3.0, 3.0, 300));
    const auto c = spectral_curve_quadratic_v(w, 0.0, s.measure);
    const auto q = contract_moments(w, s.measure);
    CHECK(c.degree_x() <= 0);
    for (int j = 0; j <= q.degree(); ++j) CHECK(c.coeff(0, j) == doctest::Approx(-q.coeff(j)).scale(0).epsilon(1e-12));
  }
}

TEST_CASE("xi from the Cauchy transform of mu1") {
  const auto s = solve_one_matrix(gaussian_potential(), GridMeasure::make(-3.0, 3.0, 400));
  const std::complex<double> z(0.0, 3.0);
  const auto xi = xi_from_mu1(z, gaussian_potential(), s.measure);
  CHECK(std::abs(xi * xi - z * xi + 1.0) <= 1e-3);
  // mass one: xi - V'(z) + 1/z = O(1/z^2)
  double prev = 0.0;
  for (double r : {20.0, 40.0}) {
    const std::complex<double> w(r, r);
    const double e = std::abs(xi_from_mu1(w, gaussian_potential(), s.measure) - w + 1.0 / w);
    if (prev > 0.0) CHECK(e < prev / 3.0);
    prev = e;
  }
  CHECK_THROWS_AS(xi_from_mu1({0.5, 0.0}, gaussian_potential(), s.measure), TooCloseToSupport);
}

TEST_CASE("sheet structure") {
  SUBCASE("Case I") {
    const auto s = solve_vector_equilibrium(0.0, 1.0, gaussian_potential(), VectorGrids::defaults());
    const auto sh = sheet_structure(s);
    REQUIRE(sh.sheets[0].size() == 1);
    CHECK(sh.sheets[0][0].lo == doctest::Approx(-s.endpoints.a));
    CHECK(sh.sheets[0][0].hi == doctest::Approx(s.endpoints.a));
    CHECK(s.endpoints.c2 > 0.1);
    CHECK_FALSE(cut_contains(sh.sheets[1], Axis::Imaginary, 0.0, 0.0));
  }
  SUBCASE("Case III") {
    const auto s = solve_vector_equilibrium(-1.5, 1.2, gaussian_potential(), VectorGrids::defaults());
    CHECK(classify_phase(-1.5, 1.2).phase == Phase::III);
    CHECK(s.endpoints.c2 == 0.0);
    CHECK(s.endpoints.c1 > 0.0);
    CHECK(s.endpoints.c3 > 0.0);
    const auto sh = sheet_structure(s);
    CHECK(cut_contains(sh.sheets[1], Axis::Imaginary, 0.0, 0.0));
    CHECK_FALSE(cut_contains(sh.sheets[0], Axis::Real, 0.0, 0.0));
  }
  SUBCASE("multicritical: all sheets meet at the origin") {
    const auto s = solve_vector_equilibrium(-1.0, 1.0, gaussian_potential(), VectorGrids::defaults());
    const auto sh = sheet_structure(s);
    const double slack = 2.0 * s.mu2.width();
    CHECK(cut_contains(sh.sheets[0], Axis::Real, 0.0, 0.0));
    CHECK(cut_contains(sh.sheets[1], Axis::Imaginary, 0.0, slack));
    CHECK(cut_contains(sh.sheets[2], Axis::Imaginary, 0.0, slack));
    CHECK(cut_contains(sh.sheets[3], Axis::Real, 0.0, 0.0));
  }
}
