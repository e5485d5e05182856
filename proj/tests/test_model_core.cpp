#include <cmath>
#include <numbers>

#include "doctest.h"

#include "tmm/airy.hpp"
#include "tmm/critical.hpp"
#include "tmm/errors.hpp"
#include "tmm/polynomial.hpp"
#include "tmm/quadrature.hpp"

using namespace tmm;
using std::numbers::pi;

TEST_CASE("polynomial arithmetic and evaluation") {
  const Polynomial p{1.0, -2.0, 0.0, 3.0};
  CHECK(p.degree() == 3);
  CHECK(p(2.0) == doctest::Approx(21.0));
  CHECK(p.derivative().coeffs() == std::vector<double>{-2.0, 0.0, 9.0});
  CHECK((p - p).is_zero());
  CHECK((p - p).degree() == -1);
  const auto q = p * Polynomial{0.0, 1.0};
  CHECK(q.degree() == 4);
  CHECK(q(2.0) == doctest::Approx(42.0));
  CHECK(quartic_potential(-1.0).is_even());
  CHECK_FALSE(p.is_even());
  CHECK(std::abs(p(std::complex<double>(0, 1)) - std::complex<double>(1.0, -5.0)) < 1e-15);
}

TEST_CASE("potential pair validation") {
  CHECK_NOTHROW(PotentialPair::quartic(-1.0, 1.0).validate());
  CHECK(PotentialPair::quartic(-0.7, 1.0).quartic_alpha() == doctest::Approx(-0.7));
  PotentialPair bad = PotentialPair::quartic(0.0, 1.0);
  bad.tau = -1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = PotentialPair::quartic(0.0, 1.0);
  bad.w = Polynomial{0.0, 0.0, 0.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("cubic real roots") {
  auto r = cubic_real_roots(1, -3, 0);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(-std::sqrt(3.0)).scale(0).epsilon(1e-14));
  CHECK(std::abs(r[1]) < 1e-14);
  CHECK(r[2] == doctest::Approx(std::sqrt(3.0)).scale(0).epsilon(1e-14));

  r = cubic_real_roots(1, -1, -1);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(1.3247179572447460).scale(0).epsilon(1e-14));

  r = cubic_real_roots(1, 0, 0);
  REQUIRE(r.size() == 3);
  for (double s : r) CHECK(std::abs(s) < 1e-14);
}

TEST_CASE("critical points of the coupled quartic") {
  auto c = critical_points(1.0, -1.0, 1.0);
  CHECK(secondary_minimum_bound(-1.0, 1.0) == doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))));
  CHECK(c.s1 == doctest::Approx(1.3247179572447460).scale(0).epsilon(1e-13));
  CHECK_FALSE(c.s2.has_value());
  CHECK_FALSE(c.s3.has_value());

  c = critical_points(0.0, 1.0, 1.0);
  CHECK(std::abs(c.s1) < 1e-15);
  CHECK_FALSE(c.s2.has_value());

  c = critical_points(0.0, -1.0, 1.0);
  CHECK(c.s1 == doctest::Approx(1.0));
  REQUIRE(c.s2.has_value());
  REQUIRE(c.s3.has_value());
  CHECK(*c.s2 == doctest::Approx(-1.0));
  CHECK(std::abs(*c.s3) < 1e-15);

  // inside the bound: three stationary points ordered as documented
  c = critical_points(0.2, -1.0, 1.0);
  REQUIRE(c.s2.has_value());
  CHECK(c.s1 > *c.s3);
  CHECK(*c.s3 > *c.s2);
}

TEST_CASE("external fields") {
  CHECK(std::abs(external_field_v1(0.0, PotentialPair::quartic(1.0, 1.0))) < 1e-15);
  CHECK(external_field_v1(0.0, PotentialPair::quartic(-1.0, 1.0)) == doctest::Approx(-0.25).scale(0).epsilon(1e-14));
  CHECK(external_field_v1(2.0, PotentialPair::quartic(0.0, 1.0)) ==
        doctest::Approx(0.110118425157690252849).scale(0).epsilon(1e-13));

  CHECK(external_field_v3(1.0, PotentialPair::quartic(-1.0, 1.0)) == 0.0);
  CHECK(external_field_v3(0.0, PotentialPair::quartic(1.0, 1.0)) == 0.0);
  CHECK(external_field_v3(0.0, PotentialPair::quartic(-1.0, 1.0)) == doctest::Approx(0.25).scale(0).epsilon(1e-14));
}

TEST_CASE("constraint density on the imaginary axis") {
  CHECK(sigma2_density(0.0, -1.0, 1.0) == doctest::Approx(1.0 / pi).scale(0).epsilon(1e-13));
  CHECK(std::abs(sigma2_density(0.0, 1.0, 1.0)) < 1e-15);
  CHECK(sigma2_density(1.0, 0.0, 1.0) == doctest::Approx(std::sqrt(3.0) / 2.0 / pi).scale(0).epsilon(1e-13));
  for (double t = -3.0; t <= 3.0; t += 0.25) CHECK(sigma2_density(t, -0.5, 1.3) >= 0.0);
}

TEST_CASE("airy function") {
  const auto a0 = airy(0.0);
  CHECK(a0.ai == doctest::Approx(0.3550280538878172).scale(0).epsilon(1e-14));
  CHECK(a0.aip == doctest::Approx(-0.2588194037928068).scale(0).epsilon(1e-14));
  CHECK(airy(6.0).ai == doctest::Approx(9.947694360252908e-06).scale(0).epsilon(1e-10));

  // mpmath reference values
  const struct {
    double x, ai, aip;
  } ref[] = {{-15, 0.27821749087082892953, 0.27237420430864202083},
             {-5, 0.35076100902411431979, 0.32719281855444313679},
             {-7, 0.18428083525050563728, -0.77100816841012654773},
             {-6, -0.32914517362982310523, 0.34593548728134289493},
             {-1, 0.5355608832923521188, -0.010160567116645209395},
             {2.5, 0.015725923380470489995, -0.026250881035903230365},
             {5, 0.00010834442813607441735, -0.000247413890868462476},
             {6, 9.9476943602528895702e-6, -0.000024765200397034954754},
             {8, 4.6922076160992316256e-8, -1.3414392979067865743e-7},
             {15, 2.164962520737992299e-18, -8.4205679540177727661e-18}};
  for (const auto& r : ref) {
    const auto v = airy(r.x);
    CHECK(std::abs(v.ai - r.ai) <= 1e-12);
    CHECK(std::abs(v.aip - r.aip) <= 1e-12);
    // relative accuracy is weakest where the two branches meet, near x = 6
    CHECK(v.ai == doctest::Approx(r.ai).scale(0).epsilon(1e-10));
    CHECK(v.aip == doctest::Approx(r.aip).scale(0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(airy(25.0), DomainError);
}

TEST_CASE("quadrature rules") {
  const auto g = gauss_legendre(8, -1.0, 2.0);
  CHECK(g.integrate([](double x) { return std::pow(x, 15); }) == doctest::Approx((std::pow(2.0, 16) - 1.0) / 16.0));
  const auto t = tanh_sinh(6, 0.0, 1.0);
  CHECK(t.integrate([](double x) { return std::sqrt(x); }) == doctest::Approx(2.0 / 3.0).scale(0).epsilon(1e-12));
  const auto c = composite_gauss_legendre({0.0, 1.0, 3.0}, 4);
  CHECK(c.nodes.size() == 8);
  CHECK(c.integrate([](double x) { return x * x; }) == doctest::Approx(9.0));
}
