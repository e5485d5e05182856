#include <cmath>
#include <numbers>

#include "doctest.h"

#include "tmm/equilibrium.hpp"
#include "tmm/errors.hpp"
#include "tmm/log_kernel.hpp"

using namespace tmm;
using std::numbers::pi;

namespace {

double density_near(const GridMeasure& g, double x) {
  const int i = static_cast<int>((x - g.left) / g.width());
  return g.density[i];
}

Polynomial double_well(double lambda) { return Polynomial({0.0, 0.0, -lambda, 0.0, 0.25 * lambda}); }

}  // namespace

TEST_CASE("grid measure bookkeeping") {
  auto g = GridMeasure::make(-1.0, 1.0, 4);
  g.density = {0.25, 0.25, 0.25, 0.25};
  CHECK(g.total_mass() == doctest::Approx(0.5));
  CHECK(g.moment(0) == doctest::Approx(0.5));
  CHECK(std::abs(g.moment(1)) < 1e-15);
  CHECK(g.moment(2) == doctest::Approx(0.25 * 2.0 / 3.0));
  CHECK(g.center(0) == doctest::Approx(-0.75));
  g.set_masses({0.1, 0.2, 0.3, 0.4});
  CHECK(g.density[3] == doctest::Approx(0.8));
  g.cells = 0;
  CHECK_THROWS_AS(g.validate(), ValidationError);
}

TEST_CASE("log kernel assembly: serial and parallel agree") {
  const auto g = GridMeasure::make(-2.0, 2.0, 120);
  const auto a = self_interaction(g, Exec::Serial), b = self_interaction(g, Exec::Parallel);
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  // off-diagonal cells far apart: close to log 1/|xi - xj|
  CHECK(a(0, 100) == doctest::Approx(-std::log(std::abs(g.center(0) - g.center(100)))).scale(0).epsilon(1e-3));
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(120, 0.0, 1.0);
  CHECK((matvec(a, x, Exec::Serial) - matvec(a, x, Exec::Parallel)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("semicircle from the one-matrix solver") {
  const auto s = solve_one_matrix(gaussian_potential(), GridMeasure::make(-3.0, 3.0, 400));
  CHECK(s.measure.total_mass() == doctest::Approx(1.0).scale(0).epsilon(1e-12));
  CHECK(density_near(s.measure, 0.0) == doctest::Approx(1.0 / pi).scale(0).epsilon(2e-2));
  CHECK(one_matrix_residual(gaussian_potential(), s.measure) <= 1e-3);
  REQUIRE(s.support_intervals.size() == 1);
  CHECK(s.support_intervals[0][1] == doctest::Approx(2.0).scale(0).epsilon(2e-2));
  CHECK(s.support_intervals[0][0] == doctest::Approx(-2.0).scale(0).epsilon(2e-2));

  const auto dc = density_from_curve(gaussian_potential(), s.measure);
  CHECK(dc.q.coeff(0) == doctest::Approx(1.0).scale(0).epsilon(1e-6));
  CHECK(dc.r.coeff(2) == doctest::Approx(0.25).scale(0).epsilon(1e-12));
  CHECK(dc.r.coeff(0) == doctest::Approx(-1.0).scale(0).epsilon(1e-6));
  CHECK(dc.gap <= 2e-2);

  // generic edges: square-root vanishing, no singular point reported
  for (const auto& sg : detect_singularity(s)) CHECK(sg.kind != "interior");
  const double e = fitted_exponent(s.measure, s.support_intervals[0][1], 0.05, 0.4, -1);
  CHECK(e == doctest::Approx(0.5).scale(0).epsilon(0.3));

  SolverOptions serial;
  serial.exec = Exec::Serial;
  const auto t = solve_one_matrix(gaussian_potential(), GridMeasure::make(-3.0, 3.0, 400), 20000, 1e-6, serial);
  double diff = 0.0;
  for (int i = 0; i < 400; ++i) diff = std::max(diff, std::abs(t.measure.density[i] - s.measure.density[i]));
  CHECK(diff <= 1e-8);
}

TEST_CASE("non-optimal trial measure has a large residual") {
  auto g = GridMeasure::make(-3.0, 3.0, 200);
  g.density.assign(200, 0.0);
  CHECK(one_matrix_residual(gaussian_potential(), g) > 1.0);
  // empty measure contracts to the zero polynomial
  CHECK(contract_moments(gaussian_potential(), g).is_zero());
}

TEST_CASE("double-well family") {
  SUBCASE("lambda = 1: quadratic vanishing at the origin") {
    const auto s = solve_one_matrix(double_well(1.0), GridMeasure::make(-3.0, 3.0, 400));
    // the density this V produces is x^2 sqrt(4 - x^2) / (2 pi)
    CHECK(density_near(s.measure, 1.0) == doctest::Approx(std::sqrt(3.0) / (2.0 * pi)).scale(0).epsilon(2e-2));
    const auto dc = density_from_curve(double_well(1.0), s.measure);
    CHECK(dc.gap <= 2e-2);
    bool found = false;
    for (const auto& sg : detect_singularity(s))
      if (sg.kind == "interior" && std::abs(sg.location) < 0.05) {
        found = true;
        CHECK(sg.exponent == doctest::Approx(2.0).scale(0).epsilon(0.15));
      }
    CHECK(found);
  }
  SUBCASE("lambda = 1.2: a gap opens") {
    const auto s = solve_one_matrix(double_well(1.2), GridMeasure::make(-3.0, 3.0, 400));
    CHECK(s.support_intervals.size() == 2);
    CHECK(density_near(s.measure, 0.0) == 0.0);
  }
  SUBCASE("lambda = 0.8: regular interior") {
    const auto s = solve_one_matrix(double_well(0.8), GridMeasure::make(-3.5, 3.5, 400));
    CHECK(s.support_intervals.size() == 1);
    for (const auto& sg : detect_singularity(s)) CHECK(sg.kind != "interior");
  }
}

TEST_CASE("grid too narrow is reported") {
  CHECK_THROWS_AS(solve_one_matrix(gaussian_potential(), GridMeasure::make(-1.0, 1.0, 100)), GridTooNarrow);
}

TEST_CASE("vector equilibrium support patterns") {
  SUBCASE("alpha = 0, tau = 1: Case I") {
    const auto s = solve_vector_equilibrium(0.0, 1.0, gaussian_potential(), VectorGrids::defaults());
    CHECK(s.endpoints.c1 == 0.0);
    CHECK(s.endpoints.c3 == 0.0);
    CHECK(s.endpoints.c2 > 0.0);
    CHECK(s.endpoints.a > 0.0);
    for (double r : s.residuals) CHECK(r <= 5e-3);
    CHECK(s.mu1.total_mass() == doctest::Approx(1.0).scale(0).epsilon(1e-10));
    CHECK(s.mu2.total_mass() == doctest::Approx(2.0 / 3.0).scale(0).epsilon(1e-10));
    CHECK(s.mu3.total_mass() == doctest::Approx(1.0 / 3.0).scale(0).epsilon(1e-10));
    // the constraint holds cell by cell
    const auto m2 = s.mu2.masses();
    for (std::size_t i = 0; i < m2.size(); ++i) CHECK(m2[i] <= s.sigma2_mass[i] + 1e-12);
    const auto pp = PotentialPair::quartic(0.0, 1.0);
    const auto rr = variational_residuals(s, pp);
    for (double r : rr) CHECK(r <= 5e-3);
  }
  SUBCASE("alpha = 0, tau = 2: Case II") {
    const auto s = solve_vector_equilibrium(0.0, 2.0, gaussian_potential(), VectorGrids::defaults());
    CHECK(s.endpoints.c1 > 0.0);
    CHECK(s.endpoints.c2 > 0.0);
    CHECK(s.endpoints.c3 == 0.0);
  }
}

TEST_CASE("small tau: mu1 approaches the semicircle") {
  // V1 -> x^2/2 as tau -> 0 and the coupling to mu2 fades
  // sigma2 thins out with tau, so mu2 needs a wide grid
  const auto s = solve_vector_equilibrium(0.0, 0.1, gaussian_potential(), VectorGrids::wide(64.0, 800));
  CHECK(density_near(s.mu1, 0.0) == doctest::Approx(1.0 / pi).scale(0).epsilon(3e-2));
  CHECK(s.endpoints.a == doctest::Approx(2.0).scale(0).epsilon(3e-2));
}
