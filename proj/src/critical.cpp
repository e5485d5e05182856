#include "tmm/critical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "tmm/errors.hpp"

namespace tmm {

void PotentialPair::validate() const {
  auto check = [](const Polynomial& p, const char* name) {
    if (p.degree() < 2 || p.degree() % 2 != 0 || p.leading() <= 0.0)
      throw ValidationError(std::string(name) + " must have even degree >= 2 and positive leading coefficient");
  };
  check(v, "V");
  check(w, "W");
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");
  if (!(scale > 0.0)) throw ValidationError("scale must be positive");
}

PotentialPair PotentialPair::quartic(double alpha, double tau) {
  return PotentialPair{gaussian_potential(), quartic_potential(alpha), tau, 1.0};
}

double PotentialPair::quartic_alpha() const {
  const auto& c = w.coeffs();
  if (w.degree() != 4 || c[4] != 0.25 || c[3] != 0.0 || c[1] != 0.0)
    throw ValidationError("W must be y^4/4 + (alpha/2) y^2");
  return 2.0 * c[2];
}

namespace {

double polish(double s, double a3, double a1, double a0) {
  double f = (a3 * s * s + a1) * s + a0;
  double df = 3.0 * a3 * s * s + a1;
  if (std::abs(df) > 1e-14 * (std::abs(a3) * s * s + std::abs(a1)) && df != 0.0) s -= f / df;
  return s;
}

}  // namespace

std::vector<double> cubic_real_roots(double a3, double a1, double a0) {
  if (a3 == 0.0) throw ValidationError("cubic_real_roots: leading coefficient is zero");
  const double p = a1 / a3;
  const double q = a0 / a3;
  std::vector<double> r;
  if (p == 0.0 && q == 0.0) return {0.0, 0.0, 0.0};

  const double disc = 4.0 * p * p * p + 27.0 * q * q;
  const double disc_scale = 4.0 * std::abs(p * p * p) + 27.0 * q * q;
  if (std::abs(disc) <= 1e-14 * disc_scale && p != 0.0) {
    // double root -3q/(2p), simple root 3q/p
    r = {3.0 * q / p, -1.5 * q / p, -1.5 * q / p};
  } else if (disc < 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = (3.0 * q / (2.0 * p)) * std::sqrt(-3.0 / p);
    arg = std::clamp(arg, -1.0, 1.0);
    const double th = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) r.push_back(m * std::cos(th - 2.0 * std::numbers::pi * k / 3.0));
    for (auto& s : r) s = polish(s, a3, a1, a0);
  } else {
    double s;
    if (p == 0.0) {
      s = std::cbrt(-q);
    } else if (p > 0.0) {
      s = -2.0 * std::sqrt(p / 3.0) * std::sinh(std::asinh((3.0 * q / (2.0 * p)) * std::sqrt(3.0 / p)) / 3.0);
    } else {
      const double sg = q > 0.0 ? 1.0 : -1.0;
      s = -2.0 * sg * std::sqrt(-p / 3.0) *
          std::cosh(std::acosh((-3.0 * std::abs(q) / (2.0 * p)) * std::sqrt(-3.0 / p)) / 3.0);
    }
    r.push_back(polish(s, a3, a1, a0));
  }
  std::sort(r.begin(), r.end());
  return r;
}

double secondary_minimum_bound(double alpha, double tau) {
  if (alpha >= 0.0) return 0.0;
  return (2.0 / tau) * std::pow(-alpha / 3.0, 1.5);
}

CriticalPoints critical_points(double x, double alpha, double tau) {
  if (!(tau > 0.0)) throw ValidationError("critical_points: tau must be positive");
  CriticalPoints cp;
  if (alpha < 0.0 && std::abs(x) < secondary_minimum_bound(alpha, tau)) {
    auto r = cubic_real_roots(1.0, alpha, -tau * x);
    cp.s3 = r[1];
    if (x >= 0.0) {
      cp.s1 = r[2];
      cp.s2 = r[0];
    } else {
      cp.s1 = r[0];
      cp.s2 = r[2];
    }
    return cp;
  }
  auto r = cubic_real_roots(1.0, alpha, -tau * x);
  // Outside the strict interior at most a double (inflection) root accompanies
  // the minimizer; pick the root with the lowest value.
  auto f = [&](double s) { return 0.25 * s * s * s * s + 0.5 * alpha * s * s - tau * x * s; };
  double best = r.front();
  for (double s : r)
    if (f(s) < f(best) || (f(s) == f(best) && s > best)) best = s;
  cp.s1 = best;
  return cp;
}

double external_field_v1(double x, const PotentialPair& pp) {
  const double alpha = pp.quartic_alpha();
  const auto cp = critical_points(x, alpha, pp.tau);
  return pp.v(x) + pp.w(cp.s1) - pp.tau * x * cp.s1;
}

double external_field_v3(double x, const PotentialPair& pp) {
  const double alpha = pp.quartic_alpha();
  const auto cp = critical_points(x, alpha, pp.tau);
  if (!cp.s2) return 0.0;
  const double v = (pp.w(*cp.s3) - pp.tau * x * *cp.s3) - (pp.w(*cp.s2) - pp.tau * x * *cp.s2);
  return std::max(v, 0.0);
}

double sigma2_density(double t, double alpha, double tau) {
  using cd = std::complex<double>;
  if (!(tau > 0.0)) throw ValidationError("sigma2_density: tau must be positive");
  const cd p = alpha;
  const cd q = cd(0.0, -tau * t);
  if (alpha == 0.0 && t == 0.0) return 0.0;
  // Cardano: s = u - p/(3u), u^3 = -q/2 +- sqrt(q^2/4 + p^3/27); take the
  // larger |u^3| to avoid cancellation.
  const cd d = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  cd u3 = -q / 2.0 + d;
  if (std::abs(-q / 2.0 - d) > std::abs(u3)) u3 = -q / 2.0 - d;
  const cd u = std::pow(u3, 1.0 / 3.0);
  const cd w(-0.5, std::sqrt(3.0) / 2.0);
  double best = -1e300;
  cd uk = u;
  for (int k = 0; k < 3; ++k, uk *= w) {
    cd s = (std::abs(uk) > 0.0) ? uk - p / (3.0 * uk) : cd(0.0);
    for (int it = 0; it < 3; ++it) {
      const cd f = s * s * s + p * s + q;
      const cd df = 3.0 * s * s + p;
      if (std::abs(df) < 1e-12) break;
      s -= f / df;
    }
    best = std::max(best, s.real());
  }
  return tau / std::numbers::pi * std::max(best, 0.0);
}

}  // namespace tmm
