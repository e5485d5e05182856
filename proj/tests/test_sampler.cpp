#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"

#include "tmm/sampler.hpp"

using namespace tmm;
using std::numbers::pi;

namespace {

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * pi) + std::asin(x / 2.0) / pi;
}

// equilibrium density of y^4/4 - y^2: y^2 sqrt(4 - y^2) / (2 pi)
double double_well_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  const double t = std::asin(x / 2.0);
  // int_{-pi/2}^{t} 16 sin^2 cos^2 / (2 pi) = (2/pi)(u/2 - sin(4u)/8)
  auto f = [](double u) { return (2.0 / pi) * (0.5 * u - std::sin(4.0 * u) / 8.0); };
  return f(t) - f(-pi / 2.0);
}

GridMeasure semicircle_grid() {
  auto g = GridMeasure::make(-2.0, 2.0, 400);
  for (int i = 0; i < g.cells; ++i)
    g.density[i] = (semicircle_cdf(g.edge(i + 1)) - semicircle_cdf(g.edge(i))) / g.width();
  return g;
}

std::vector<double> all_states(const MetropolisRun& run) {
  std::vector<double> v;
  for (const auto& s : run.states) v.insert(v.end(), s.begin(), s.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("seed derivation is deterministic and spreads") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("GUE, n = 1 is a standard normal") {
  double m = 0.0, m2 = 0.0;
  const int draws = 4000;
  for (int k = 0; k < draws; ++k) {
    const double x = sample_gue(1, derive_seed(11, k)).values[0];
    m += x / draws;
    m2 += x * x / draws;
  }
  CHECK(std::abs(m) < 0.05);
  CHECK(m2 == doctest::Approx(1.0).scale(0).epsilon(0.06));
}

TEST_CASE("GUE, n = 200: semicircle and second moment") {
  std::vector<double> all;
  double second = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto s = sample_gue(200, derive_seed(2024, k));
    CHECK(std::is_sorted(s.values.begin(), s.values.end()));
    double acc = 0.0;
    for (double x : s.values) acc += x * x;
    second += acc / 200.0 / 100.0;
    all.insert(all.end(), s.values.begin(), s.values.end());
  }
  CHECK(kolmogorov_distance(all, semicircle_cdf) <= 0.03);
  CHECK(second == doctest::Approx(1.0).scale(0).epsilon(0.05));
  // identical seeds, identical output
  CHECK(sample_gue(50, 99).values == sample_gue(50, 99).values);
}

TEST_CASE("Metropolis one-matrix chains") {
  SUBCASE("W = y^2/2, n = 100: semicircle") {
    const auto run = metropolis_chain(Polynomial{0.0, 0.0, 0.5}, 100, 50, 7);
    CHECK(run.states.size() == 50);
    CHECK(run.acceptance > 0.1);
    CHECK(run.acceptance < 0.9);
    CHECK(kolmogorov_distance(all_states(run), semicircle_cdf) <= 0.05);
  }
  SUBCASE("W = y^4/4 - y^2, n = 100: quadratic dip at the origin") {
    const auto run = metropolis_chain(Polynomial{0.0, 0.0, -1.0, 0.0, 0.25}, 100, 50, 8);
    CHECK(kolmogorov_distance(all_states(run), double_well_cdf) <= 0.06);
  }
  SUBCASE("n = 1: plain Gaussian") {
    const auto run = metropolis_chain(Polynomial{0.0, 0.0, 0.5}, 1, 2000, 9);
    double m = 0.0;
    for (const auto& s : run.states) m += s[0] / run.states.size();
    CHECK(std::abs(m) < 0.1);
  }
  const auto last = metropolis_one_matrix(Polynomial{0.0, 0.0, 0.5}, 20, 5, 50, 3);
  CHECK(last.n == 20);
  CHECK(last.values.size() == 20);
}

TEST_CASE("M1 samples") {
  CHECK(m1_effective_potential(-1.0, 1.0).coeff(2) == doctest::Approx(-1.0));
  CHECK(m1_effective_potential(0.5, 2.0).coeff(4) == doctest::Approx(0.25));

  SUBCASE("tau -> 0 recovers GUE") {
    ChainParams cp;
    cp.burnin = 50;
    const auto batch = sample_m1_batch(0.0, 1e-6, 60, 40, 5, cp);
    std::vector<double> gue;
    for (int k = 0; k < 40; ++k) {
      const auto s = sample_gue(60, derive_seed(77, k));
      gue.insert(gue.end(), s.values.begin(), s.values.end());
    }
    std::sort(gue.begin(), gue.end());
    const auto ecdf = [&](double x) {
      return static_cast<double>(std::upper_bound(gue.begin(), gue.end(), x) - gue.begin()) / gue.size();
    };
    CHECK(kolmogorov_distance(pooled(batch), ecdf) <= 0.05);
  }

  SUBCASE("batch is reproducible and independent of the worker count") {
    ChainParams cp;
    cp.burnin = 20;
    const auto a = sample_m1_batch(0.0, 1.0, 20, 8, 42, cp);
    const auto b = sample_m1_batch_serial(0.0, 1.0, 20, 8, 42, cp);
    cp.jobs = 1;
    const auto c = sample_m1_batch(0.0, 1.0, 20, 8, 42, cp);
    REQUIRE(a.size() == 8);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].values == b[i].values);
      CHECK(a[i].values == c[i].values);
      CHECK(a[i].seed == b[i].seed);
    }
  }

  SUBCASE("multicritical: the density dips at the origin") {
    ChainParams cp;
    cp.burnin = 100;
    const auto all = pooled(sample_m1_batch(-1.0, 1.0, 150, 24, 31, cp));
    auto count = [&](double lo, double hi) {
      return std::upper_bound(all.begin(), all.end(), hi) - std::lower_bound(all.begin(), all.end(), lo);
    };
    // same window width at the origin and out in the bulk
    CHECK(count(-0.15, 0.15) < count(0.85, 1.15));
  }
}

TEST_CASE("Wasserstein-1 against a grid measure") {
  const auto g = semicircle_grid();
  // point mass at the origin: E|X| = 8 / (3 pi)
  CHECK(wasserstein1(std::vector<double>{0.0}, g) == doctest::Approx(8.0 / (3.0 * pi)).scale(0).epsilon(1e-4));
  // quantiles of the measure itself
  std::vector<double> q;
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const double p = (k + 0.5) / n;
    double lo = -2.0, hi = 2.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (semicircle_cdf(mid) < p ? lo : hi) = mid;
    }
    q.push_back(0.5 * (lo + hi));
  }
  CHECK(wasserstein1(q, g) <= 0.01);
}
