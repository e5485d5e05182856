#include "tmm/airy.hpp"

#include <cmath>
#include <numbers>

#include "tmm/errors.hpp"

namespace tmm {

namespace detail {

AiryValue airy_series(double xd) {
  // Ai = c1 f - c2 g with f = sum 3^k (1/3)_k x^{3k}/(3k)!,
  // g = sum 3^k (2/3)_k x^{3k+1}/(3k+1)!.
  const long double c1 = 0.355028053887817239260063186004183177L;
  const long double c2 = 0.258819403792806798405183560189203963L;
  if (xd == 0.0) return {static_cast<double>(c1), static_cast<double>(-c2)};
  const long double x = xd;
  const long double x3 = x * x * x;
  long double tf = 1.0L, tg = x;      // current terms of f and g
  long double tfp = 0.0L, tgp = 1.0L; // current terms of f' and g'
  long double f = tf, g = tg, fp = 0.0L, gp = tgp;
  for (int k = 1; k < 200; ++k) {
    // f_k = f_{k-1} x^3 / ((3k-1)(3k)),  g_k = g_{k-1} x^3 / ((3k)(3k+1))
    tf *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
    tg *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
    tfp = tf * 3.0L * k / x;
    tgp = tg * (3.0L * k + 1.0L) / x;
    f += tf;
    g += tg;
    fp += tfp;
    gp += tgp;
    if (std::fabs(tf) + std::fabs(tg) < 1e-22L * (std::fabs(f) + std::fabs(g)) &&
        std::fabs(tfp) + std::fabs(tgp) < 1e-22L * (std::fabs(fp) + std::fabs(gp) + 1.0L))
      break;
  }
  return {static_cast<double>(c1 * f - c2 * g), static_cast<double>(c1 * fp - c2 * gp)};
}

AiryValue airy_asymptotic(double x) {
  const double pi = std::numbers::pi;
  const double z = std::abs(x);
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  // u_k, v_k expansion coefficients
  double u[64], v[64];
  u[0] = v[0] = 1.0;
  for (int k = 1; k < 64; ++k) {
    u[k] = u[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
    v[k] = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u[k];
  }
  if (x > 0.0) {
    double su = 0.0, sv = 0.0, pw = 1.0, last = 1e300;
    for (int k = 0; k < 64; ++k) {
      const double tu = u[k] * pw, tv = v[k] * pw;
      if (std::abs(tu) > last) break;
      last = std::abs(tu);
      const double sg = (k % 2 == 0) ? 1.0 : -1.0;
      su += sg * tu;
      sv += sg * tv;
      pw /= zeta;
    }
    const double e = std::exp(-zeta) / (2.0 * std::sqrt(pi));
    return {e / std::pow(z, 0.25) * su, -e * std::pow(z, 0.25) * sv};
  }
  // Oscillatory side, x = -z.
  double ue = 0.0, uo = 0.0, ve = 0.0, vo = 0.0, pw = 1.0, last = 1e300;
  for (int k = 0; k < 64; ++k) {
    const double tu = u[k] * pw;
    if (std::abs(tu) > last) break;
    last = std::abs(tu);
    // (-1)^{floor(k/2)} pattern of the even/odd sub-series
    const double sg = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      ue += sg * tu;
      ve += sg * v[k] * pw;
    } else {
      uo += sg * tu;
      vo += sg * v[k] * pw;
    }
    pw /= zeta;
  }
  const double c = std::cos(zeta - pi / 4.0), s = std::sin(zeta - pi / 4.0);
  const double ai = (c * ue + s * uo) / (std::sqrt(pi) * std::pow(z, 0.25));
  const double aip = std::pow(z, 0.25) / std::sqrt(pi) * (s * ve - c * vo);
  return {ai, aip};
}

}  // namespace detail

AiryValue airy(double x) {
  if (!(x >= -20.0 && x <= 20.0)) throw DomainError("airy: argument outside [-20, 20]");
  if (x > 6.0 || x < -8.0) return detail::airy_asymptotic(x);
  return detail::airy_series(x);
}

}  // namespace tmm
