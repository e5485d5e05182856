#include <cmath>
#include <numbers>

#include "doctest.h"

#include "tmm/biorthogonal.hpp"
#include "tmm/errors.hpp"
#include "tmm/quadrature.hpp"
#include "tmm/rh.hpp"

using namespace tmm;
using std::numbers::pi;

namespace {

// alpha = 0, tau = 1, n = 6, size 12; built once
const BiorthogonalFamily& reference_family() {
  static const BiorthogonalFamily f = biorthogonal_family(bimoments(PotentialPair::quartic(0.0, 1.0), 6, 12));
  return f;
}

PotentialPair gaussian_pair(double tau) {
  PotentialPair pp;
  pp.v = gaussian_potential();
  pp.w = gaussian_potential();
  pp.tau = tau;
  return pp;
}

}  // namespace

TEST_CASE("bimoments of the factorized Gaussian weight") {
  const auto b = bimoments(gaussian_pair(0.0), 1, 5);
  // 1D moments of exp(-x^2/2): sqrt(2 pi) * (k-1)!! for even k
  const double m[5] = {std::sqrt(2 * pi), 0.0, std::sqrt(2 * pi), 0.0, 3.0 * std::sqrt(2 * pi)};
  CHECK(b.value(0, 0) == doctest::Approx(2.0 * pi).scale(0).epsilon(1e-14));
  for (int j = 0; j < 5; ++j)
    for (int k = 0; k < 5; ++k) CHECK(std::abs(b.value(j, k) - m[j] * m[k]) <= 1e-13 * (1.0 + std::abs(m[j] * m[k])));
}

TEST_CASE("bimoment matrix structure") {
  const auto b = bimoments(PotentialPair::quartic(0.0, 1.0), 1, 4);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      if ((j + k) % 2) CHECK(b.value(j, k) == 0.0);
  CHECK(b.value(0, 0) > 0.0);
  // pivots of the pairing are positive
  const auto f = biorthogonal_family(b);
  for (double h : f.h_sq) CHECK(h > 0.0);

  CHECK_THROWS_AS(bimoments(PotentialPair::quartic(0.0, 1.0), 1, 49), SizeTooLarge);
  CHECK_THROWS_AS(bimoments(gaussian_pair(2.0), 1, 4), NonConfiningWeight);
}

TEST_CASE("frozen reference family: alpha = 0, tau = 1, n = 6, size 12") {
  const auto& f = reference_family();
  REQUIRE(f.size == 12);
  const double h_sq[12] = {7.5201467027004157,  6.2821836294672726,  2.2875279482773422,  1.6376767536045132,
                           1.0126762242172623,  0.75327013338470719, 0.57106051333764905, 0.46662655576882594,
                           0.39781905943717975, 0.3557630522199001,  0.33103539598938093, 0.31990783819015212};
  for (int k = 0; k < 12; ++k) CHECK(f.h_sq[k] == doctest::Approx(h_sq[k]).scale(0).epsilon(1e-10));
  CHECK(f.p[2].coeff(0) == doctest::Approx(-1.002047129020067).scale(0).epsilon(1e-10));
  CHECK(f.p[3].coeff(1) == doctest::Approx(-1.6995098930098748).scale(0).epsilon(1e-10));
  CHECK(f.p[11].coeff(1) == doctest::Approx(-34.795390107864595).scale(0).epsilon(1e-10));
  CHECK(f.p[11].coeff(9) == doctest::Approx(-16.696846207712567).scale(0).epsilon(1e-10));
  CHECK(f.q[2].coeff(0) == doctest::Approx(-0.83538046235340037).scale(0).epsilon(1e-10));
  CHECK(f.q[3].coeff(1) == doctest::Approx(-1.1995098930098748).scale(0).epsilon(1e-10));
  CHECK(f.q[11].coeff(1) == doctest::Approx(-1.8219710359951375).scale(0).epsilon(1e-10));

  CHECK(f.residual <= 1e-8);
  for (int k = 0; k < 12; ++k) {
    CHECK(f.p[k].degree() == k);
    CHECK(f.p[k].leading() == 1.0);
    CHECK(f.q[k].leading() == 1.0);
    // definite parity for the even weight
    for (int j = 0; j <= k; ++j)
      if ((k - j) % 2) {
        CHECK(std::abs(f.p[k].coeff(j)) <= 1e-20);
        CHECK(std::abs(f.q[k].coeff(j)) <= 1e-20);
      }
  }
  CHECK(f.p[1].coeffs() == std::vector<double>{0.0, 1.0});

  const auto zp = check_zeros(f.p), zq = check_zeros(f.q);
  CHECK(zp.real);
  CHECK(zp.simple);
  CHECK(zp.interlacing);
  CHECK(zq.real);
  CHECK(zq.interlacing);
}

TEST_CASE("frozen bimoments and precision stability") {
  const auto pp = PotentialPair::quartic(0.0, 1.0);
  const auto b = bimoments(pp, 6, 12);
  CHECK(b.value(0, 0) == doctest::Approx(7.5201467027004157).scale(0).epsilon(1e-12));
  CHECK(b.value(2, 2) == doctest::Approx(8.5825720181618873).scale(0).epsilon(1e-12));
  // doubling the working precision leaves h^2 unchanged
  const auto f512 = biorthogonal_family(bimoments(pp, 6, 12, 512), false);
  for (int k = 0; k < 12; ++k) CHECK(f512.h_sq[k] == doctest::Approx(reference_family().h_sq[k]).scale(0).epsilon(1e-10));
  // node refinement leaves the entries unchanged
  BimomentRule dense;
  dense.density = 1.5;
  const auto b2 = bimoments(pp, 6, 12, 256, dense);
  for (int j = 0; j < 12; j += 3)
    for (int k = j % 2; k < 12; k += 2) CHECK(b2.value(j, k) == doctest::Approx(b.value(j, k)).scale(0).epsilon(1e-13));
}

TEST_CASE("tau -> 0: one-matrix orthogonal polynomials") {
  const auto pp = PotentialPair::quartic(0.0, 1e-8);
  const auto f = biorthogonal_family(bimoments(pp, 6, 8, 512));
  const auto p0 = orthogonal_family(pp.v, 6, 8).monic();
  const auto q0 = orthogonal_family(pp.w, 6, 8).monic();
  CHECK(coefficient_gap(f.p, p0) <= 1e-6);
  CHECK(coefficient_gap(f.q, q0) <= 1e-6);
  // exactly factorized weight: the bimoment matrix has rank one
  CHECK_THROWS_AS(biorthogonal_family(bimoments(gaussian_pair(0.0), 1, 3)), SingularMinor);
}

TEST_CASE("w functions") {
  // alpha = 0, tau = 1, n = 1, j = 0, x = 1; independent refinement oracle
  CHECK(w_function(1.0, 0, PotentialPair::quartic(0.0, 1.0), 1) == doctest::Approx(2.14988637643117).scale(0).epsilon(1e-10));
  CHECK(std::abs(w_function(0.0, 1, PotentialPair::quartic(0.0, 1.0), 1)) <= 1e-15);
  // tau = 0 separates: exp(-n V(x)) * int exp(-n W)
  const auto g = gaussian_pair(0.0);
  CHECK(w_function(0.7, 0, g, 2) == doctest::Approx(std::exp(-2.0 * 0.245) * std::sqrt(pi)).scale(0).epsilon(1e-10));
}

TEST_CASE("Eynard-Mehta kernels") {
  const KernelSet ks(reference_family());
  CHECK(ks(KernelKind::K12, 0.3, 0.2) == doctest::Approx(10.1402).scale(0).epsilon(1e-5));
  CHECK(ks(KernelKind::K11, 0.3, 0.2) == doctest::Approx(1.91125).scale(0).epsilon(1e-5));
  CHECK(ks(KernelKind::K21, 0.3, 0.2) == doctest::Approx(-0.00440294).scale(0).epsilon(1e-5));
  CHECK(ks(KernelKind::K22, 0.3, 0.2) == doctest::Approx(2.10717).scale(0).epsilon(1e-5));
  CHECK(correlation_det(ks, {0.1, 0.5}) == doctest::Approx(3.189).scale(0).epsilon(1e-3));
  CHECK(kernel_kind("K21") == KernelKind::K21);
  CHECK(ks.d_w() == 4);

  SUBCASE("size 1: K12 = 1 / h0^2") {
    const auto f1 = biorthogonal_family(bimoments(PotentialPair::quartic(0.0, 1.0), 1, 1));
    const KernelSet k1(f1);
    CHECK(k1(KernelKind::K12, 0.4, -1.3) == doctest::Approx(1.0 / f1.h_sq[0]).scale(0).epsilon(1e-14));
  }

  SUBCASE("trace and reproducing property at size 6") {
    const auto f6 = biorthogonal_family(bimoments(PotentialPair::quartic(0.0, 1.0), 6, 6));
    const KernelSet k6(f6);
    const auto rule = composite_gauss_legendre({-4, -2, -1, 0, 1, 2, 4}, 40);
    const double trace = rule.integrate([&](double x) { return k6(KernelKind::K11, x, x); });
    CHECK(trace == doctest::Approx(6.0).scale(0).epsilon(1e-6));
    for (const auto [a, b] : {std::pair{0.2, -0.4}, std::pair{1.0, 0.5}}) {
      const double back = rule.integrate([&](double x) { return k6(KernelKind::K11, a, x) * k6(KernelKind::K11, x, b); });
      CHECK(back == doctest::Approx(k6(KernelKind::K11, a, b)).scale(0).epsilon(1e-6));
    }
  }

  SUBCASE("correlation determinants") {
    for (double x = -2.0; x <= 2.0; x += 0.1) CHECK(correlation_det(ks, {x}) >= 0.0);
    const double d1 = correlation_det(ks, {0.3, 0.3 + 1e-3}), d2 = correlation_det(ks, {0.3, 0.3 + 1e-4});
    CHECK(std::abs(d2) < std::abs(d1));
    // at least linear decay as the points merge
    CHECK(std::abs(d2) <= 0.15 * std::abs(d1));
    const double far = correlation_det(ks, {-2.0, 2.0});
    CHECK(far == doctest::Approx(correlation_det(ks, {-2.0}) * correlation_det(ks, {2.0})).scale(0).epsilon(1e-2));
  }
}

TEST_CASE("one-matrix orthogonal polynomials and kernel") {
  const auto f = orthogonal_family(gaussian_potential(), 60, 60);
  const auto rule = composite_gauss_legendre({-3, -2.5, -2, -1, 0, 1, 2, 2.5, 3}, 40);
  CHECK(rule.integrate([&](double x) { return one_matrix_kernel(f, x, x); }) == doctest::Approx(60.0).scale(0).epsilon(1e-6));
  // Hermite recurrence for exp(-n x^2/2): a_k = 0, b_k = k / n
  for (int k = 1; k < 60; ++k) CHECK(f.b[k] == doctest::Approx(k / 60.0).scale(0).epsilon(1e-10));
  // bulk: rho(0) = 1/pi
  const double scale = 60.0 / pi;
  double es = 0.0;
  for (double u = -1.0; u <= 1.0; u += 0.25)
    for (double v = -1.0; v <= 1.0; v += 0.25)
      es = std::max(es, std::abs(one_matrix_kernel(f, u / scale, v / scale) / scale - sine_kernel(u, v)));
  CHECK(es <= 0.05);
  const double edge = std::pow(60.0, 2.0 / 3.0);
  double ea = 0.0;
  for (double u = -1.0; u <= 1.0; u += 0.25)
    for (double v = -1.0; v <= 1.0; v += 0.25)
      ea = std::max(ea, std::abs(one_matrix_kernel(f, 2.0 + u / edge, 2.0 + v / edge) / edge - airy_kernel(u, v)));
  CHECK(ea <= 0.1);
  CHECK(one_matrix_kernel(gaussian_potential(), 60, 60, 0.1, 0.2) == doctest::Approx(one_matrix_kernel(f, 0.1, 0.2)));
}
