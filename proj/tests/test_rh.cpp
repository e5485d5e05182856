#include <cmath>
#include <numbers>

#include "doctest.h"

#include "tmm/airy.hpp"
#include "tmm/errors.hpp"
#include "tmm/rh.hpp"

using namespace tmm;
using std::numbers::pi;

namespace {

const HMSolution& hm() {
  static const HMSolution s = hastings_mcleod();
  return s;
}

double max_gap(const Mat2& a, const Mat2& b) {
  double m = 0.0;
  for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Mat2 times(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

}  // namespace

TEST_CASE("sine kernel") {
  CHECK(sine_kernel(0.3, 0.3) == doctest::Approx(1.0));
  CHECK(sine_kernel(0.5, 0.0) == doctest::Approx(2.0 / pi).scale(0).epsilon(1e-15));
  CHECK(std::abs(sine_kernel(1.0, 0.0)) < 1e-15);
  CHECK(sine_kernel(0.3, 0.3 + 1e-9) == doctest::Approx(1.0).scale(0).epsilon(1e-12));
}

TEST_CASE("Airy kernel") {
  CHECK(airy_kernel(0.0, 0.0) == doctest::Approx(0.06698748377966397).scale(0).epsilon(1e-13));
  CHECK(airy_kernel(5.0, 5.0) <= 1e-6);
  CHECK(airy_kernel(1.0, 1.0) == doctest::Approx(0.0070238701595382203773).scale(0).epsilon(1e-11));
  CHECK(airy_kernel(0.5, -1.0) == doctest::Approx(0.078732763397670284904).scale(0).epsilon(1e-11));
  CHECK(airy_kernel(2.0, 1.5) == doctest::Approx(0.00081645252339217093243).scale(0).epsilon(1e-10));
  for (double x : {-3.0, -0.4, 0.7, 2.2})
    for (double y : {-1.1, 0.0, 1.9}) CHECK(airy_kernel(x, y) == airy_kernel(y, x));
  CHECK(airy_kernel(0.7, 0.7 + 1e-7) == doctest::Approx(airy_kernel(0.7, 0.7)).scale(0).epsilon(1e-6));
}

TEST_CASE("Pearcey kernel") {
  // independent reference from a one-dimensional mpmath representation
  CHECK(pearcey_kernel(0.0, 0.0, 0.0) == doctest::Approx(0.15561232394807).scale(0).epsilon(1e-12));
  CHECK(pearcey_kernel(0.0, 0.0, 1.0) == doctest::Approx(0.063325655311491).scale(0).epsilon(1e-12));
  CHECK(pearcey_kernel(0.5, -0.3, 1.0) == doctest::Approx(0.072395935009099).scale(0).epsilon(1e-12));

  for (const auto& t : {std::array<double, 3>{0.0, 0.0, 0.0}, {1.0, -0.5, 2.0}, {-1.3, 0.4, -1.0}}) {
    const auto v = pearcey_eval(t[0], t[1], t[2]);
    CHECK(v.doubling_gap <= 1e-8);
    CHECK(std::abs(v.imag) <= 1e-8);
    CHECK(std::abs(v.value - pearcey_eval(-t[0], -t[1], t[2]).value) <= 1e-8);
    PearceyOptions wide;
    wide.radius_scale = 1.5;
    CHECK(std::abs(v.value - pearcey_eval(t[0], t[1], t[2], wide).value) <= 1e-8);
    PearceyOptions shifted;
    shifted.vertex_shift = 0.5;
    CHECK(std::abs(v.value - pearcey_eval(t[0], t[1], t[2], shifted).value) <= 1e-8);
  }
  CHECK(pearcey_kernel(0.0, 0.0, 0.0) > 0.0);
  CHECK(pearcey_kernel(0.0, 0.0, 8.0) < pearcey_kernel(0.0, 0.0, 0.0));
}

TEST_CASE("Hastings-McLeod solution") {
  const auto& s = hm();
  CHECK(std::abs(s.q_at(6.0) - airy(6.0).ai) <= 1e-6 * airy(6.0).ai);
  CHECK(hm_collocation_residual(s) <= 1e-8);
  CHECK(s.residual <= 1e-8);
  for (double q : s.q) CHECK(q > 0.0);
  // literature values at the origin
  CHECK(s.q_at(0.0) == doctest::Approx(0.3670615515480784).scale(0).epsilon(1e-9));
  CHECK(s.q_prime_at(0.0) == doctest::Approx(-0.2953721054475501).scale(0).epsilon(1e-8));
  CHECK(s.nu_max() == doctest::Approx(8.0));
  CHECK(s.nu_min() == doctest::Approx(-10.0));

  const auto half = hastings_mcleod(-10.0, 8.0, 0.005);
  double d = 0.0;
  for (std::size_t i = 0; i < s.nu_grid.size(); ++i) d = std::max(d, std::abs(half.q_at(s.nu_grid[i]) - s.q[i]));
  CHECK(d <= 1e-8);

  CHECK_THROWS_AS(hastings_mcleod(-10.0, 30.0, 0.01), ValidationError);
  CHECK_THROWS_AS(hastings_mcleod(-10.0, 8.0, 0.5), ValidationError);
}

TEST_CASE("Psi for the Painleve II problem") {
  const auto& s = hm();

  SUBCASE("series starts at the identity") {
    const auto m = psi_series(s.q_at(0.0), s.q_prime_at(0.0), 0.0, 5);
    CHECK(std::abs(m[0][0] - 1.0) < 1e-15);
    CHECK(std::abs(m[0][1]) < 1e-15);
    CHECK(std::abs(m[0][3] - 1.0) < 1e-15);
  }

  SUBCASE("reference value from an independent prototype") {
    const auto v = psi_solve({0.7, 0.2}, 0.0, s);
    CHECK(v.sector == PsiSector::I);
    const Mat2 ref = {cplx(1.39158766, -0.56588984), cplx(-0.06118237, -0.12180877), cplx(-0.04604835, 0.41291764),
                      cplx(0.65431467, 0.25195383)};
    CHECK(max_gap(v.matrix, ref) <= 1e-7);
  }

  SUBCASE("determinant and sectors") {
    CHECK(std::abs(psi_solve(std::polar(2.0, pi / 3.0), 0.0, s).det() - 1.0) <= 1e-8);
    CHECK(psi_sector({1.0, 0.0}) == PsiSector::I);
    CHECK(psi_sector({0.0, 1.0}) == PsiSector::II);
    CHECK(psi_sector({-1.0, 0.0}) == PsiSector::III);
    CHECK(psi_sector({0.0, -1.0}) == PsiSector::IV);
    CHECK_THROWS_AS(psi_solve(std::polar(1.0, pi / 6.0 + 0.01), 0.0, s), SectorBoundaryTooClose);
  }

  SUBCASE("jumps on all four rays") {
    const auto js = pii_jumps();
    const PsiSector minus[4] = {PsiSector::I, PsiSector::II, PsiSector::III, PsiSector::IV};
    const PsiSector plus[4] = {PsiSector::II, PsiSector::III, PsiSector::IV, PsiSector::I};
    for (int k = 0; k < 4; ++k) {
      const auto z = std::polar(1.5, js.rays[k].angle);
      const auto& j = js.rays[k].jump;
      const Mat2 jm = {cplx(double(j[0])), cplx(double(j[1])), cplx(double(j[2])), cplx(double(j[3]))};
      // counterclockwise orientation: the + side lies ahead
      const auto a = psi_in_sector(z, 0.0, s, minus[k]), b = psi_in_sector(z, 0.0, s, plus[k]);
      const double r = std::min(max_gap(times(a.matrix, jm), b.matrix), max_gap(times(b.matrix, jm), a.matrix));
      CHECK(r <= 1e-6);
    }
  }

  SUBCASE("path independence") {
    const cplx z(0.3, 1.1);
    PsiOptions o1, o2;
    o1.radius = 7.0;
    o2.radius = 9.0;
    o2.start_angle = 2.0 * pi / 3.0;
    const auto a = psi_solve(z, 0.0, s, o1), b = psi_solve(z, 0.0, s, o2);
    CHECK(max_gap(a.matrix, b.matrix) <= 1e-7);
  }

  SUBCASE("q from the 12-entry, normalization -i q / 2") {
    // the probe carries a 1/zeta tail; remove it by extrapolation
    const double radii[4] = {8.0, 10.0, 12.0, 16.0};
    cplx t[4];
    for (int i = 0; i < 4; ++i) t[i] = psi_q_probe(radii[i], 0.0, s);
    for (int m = 1; m < 4; ++m)
      for (int i = 3; i >= m; --i) {
        const double hi = 1.0 / radii[i], lo = 1.0 / radii[i - m];
        t[i] = (t[i] * lo - t[i - 1] * hi) / (lo - hi);
      }
    CHECK(std::abs(t[3] - cplx(0.0, -0.5 * s.q_at(0.0))) <= 1e-5);
  }
}

TEST_CASE("Painleve II kernel") {
  const auto& s = hm();
  // values from an independent prototype
  CHECK(kpii_kernel(0.3, 0.1, 0.0, s) == doctest::Approx(-0.16134279820953942).scale(0).epsilon(1e-8));
  CHECK(kpii_kernel(-1.0, 0.5, 0.0, s) == doctest::Approx(-0.22859838546572442).scale(0).epsilon(1e-8));
  CHECK(kpii_kernel(1.2, -0.7, 0.0, s) == doctest::Approx(-0.03189505039889593).scale(0).epsilon(1e-8));
  for (const auto [x, y] : {std::pair{0.3, 0.1}, std::pair{-1.0, 0.5}, std::pair{0.8, 1.6}}) {
    CHECK(std::abs(kpii_kernel(x, y, 0.0, s) - kpii_kernel(y, x, 0.0, s)) <= 1e-6);
    const auto a = kpii_eval(x, y, 0.0, s), b = kpii_eval(x, y, 0.0, s, true);
    CHECK(std::abs(a.value - b.value) <= 1e-10);
    CHECK(std::abs(a.imag) <= 1e-8);
  }
  const double e3 = kpii_kernel(0.5, 0.5 + 1e-3, 0.0, s), e4 = kpii_kernel(0.5, 0.5 + 1e-4, 0.0, s);
  CHECK(std::abs(std::abs(e3) - std::abs(e4)) <= 1e-3);
  CHECK(kpii_kernel(0.5, 0.5, 0.0, s) == doctest::Approx(e4).scale(0).epsilon(1e-3));
}

TEST_CASE("jump systems") {
  const auto p = pii_jumps();
  CHECK(p.rays.size() == 4);
  CHECK(jump_cycle_check(p) == 0);
  for (const auto& r : p.rays) CHECK(integer_det(r.jump, 2) == 1);
  CHECK_NOTHROW(p.validate());

  const auto c = critical_jumps(0.4, 1.0);
  CHECK(c.rays.size() == 10);
  CHECK(jump_cycle_check(c) == 0);
  for (const auto& r : c.rays) CHECK(integer_det(r.jump, 4) == 1);
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(critical_jumps(1.0, 0.4), ValidationError);

  JumpSystem one;
  one.size = 2;
  one.rays = {p.rays[0]};
  CHECK(jump_cycle_check(one) > 0);

  CHECK(integer_det({2, 1, 1, 1}, 2) == 1);
  CHECK(integer_det({1, 2, 3, 0, 1, 4, 5, 6, 0}, 3) == 1);
}

TEST_CASE("double scaling data") {
  auto m = double_scaling_map(0.0, 0.0);
  CHECK(m[0] == 0.0);
  CHECK(m[1] == 0.0);
  m = double_scaling_map(2.0, 0.0);
  CHECK(m[0] == doctest::Approx(1.0));
  CHECK(m[1] == doctest::Approx(-2.0));
  m = double_scaling_map(1.0, 1.0);
  CHECK(m[0] == doctest::Approx(-1.0));
  CHECK(m[1] == doctest::Approx(-1.0));

  const auto cp = critical_parameters(0.5, -0.25, 8.0);
  CHECK(cp[0] == doctest::Approx(-1.0 + 0.5 * 0.5 * 2.0 + 0.25 * 0.25));
  CHECK(cp[1] == doctest::Approx(1.0 + 0.5 * 0.5 - 0.25 * 0.25 * 2.0));

  const auto d = critical_kernel_data(2.0, 0.0);
  CHECK(d.s == doctest::Approx(1.0));
  CHECK(d.t == doctest::Approx(-2.0));
  const cplx z(0.7, 0.4);
  const auto e = d.exponents(z);
  const cplx mz = std::sqrt(-z), pz = std::sqrt(z);
  const cplx a = 2.0 / 3.0 * mz * mz * mz + 2.0 * d.s * mz, b = 2.0 / 3.0 * pz * pz * pz + 2.0 * d.s * pz;
  CHECK(std::abs(e[0] - (-a + d.t * z)) <= 1e-14);
  CHECK(std::abs(e[1] - (-b - d.t * z)) <= 1e-14);
  CHECK(std::abs(e[2] - (a + d.t * z)) <= 1e-14);
  CHECK(std::abs(e[3] - (b - d.t * z)) <= 1e-14);
}
