#include <algorithm>
#include <cmath>

#include "tmm/airy.hpp"
#include "tmm/errors.hpp"
#include "tmm/rh.hpp"

namespace tmm {

namespace {

// q ~ sqrt(-nu/2) (1 + 1/(8 nu^3) - 73/(128 nu^6) + 10657/(1024 nu^9)) as nu -> -inf
double left_value(double nu) {
  const double u = 1.0 / (nu * nu * nu);
  return std::sqrt(-nu / 2.0) * (1.0 + u / 8.0 - 73.0 / 128.0 * u * u + 10657.0 / 1024.0 * u * u * u);
}

double left_slope(double nu) {
  const double u = 1.0 / (nu * nu * nu);
  const double s = 1.0 + u / 8.0 - 73.0 / 128.0 * u * u + 10657.0 / 1024.0 * u * u * u;
  const double ds = (-3.0 / nu) * (u / 8.0 - 2.0 * 73.0 / 128.0 * u * u + 3.0 * 10657.0 / 1024.0 * u * u * u);
  const double r = std::sqrt(-nu / 2.0);
  return -s / (4.0 * r) + r * ds;
}

double force(double q, double nu) { return 2.0 * q * q * q + nu * q; }

// Numerov residuals on an ascending grid, scaled by 1/h^2.
void residuals(const std::vector<double>& nu, const std::vector<double>& q, double h, std::vector<double>& r) {
  const int n = static_cast<int>(q.size());
  r.assign(n, 0.0);
  for (int i = 1; i + 1 < n; ++i)
    r[i] = (q[i + 1] - 2.0 * q[i] + q[i - 1]) / (h * h) -
           (force(q[i + 1], nu[i + 1]) + 10.0 * force(q[i], nu[i]) + force(q[i - 1], nu[i - 1])) / 12.0;
}

double sup(const std::vector<double>& r) {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

HMSolution hastings_mcleod(double nu_min, double nu_max, double step) {
  if (!(nu_max >= 6.0) || nu_max > 20.0) throw ValidationError("hastings_mcleod: need 6 <= nu_max <= 20");
  if (!(nu_min >= -10.0) || !(nu_min <= -2.0)) throw ValidationError("hastings_mcleod: need -10 <= nu_min <= -2");
  if (!(step > 0.0) || step > 0.1) throw ValidationError("hastings_mcleod: step must be in (0, 0.1]");
  const int cells = static_cast<int>(std::lround((nu_max - nu_min) / step));
  const double h = (nu_max - nu_min) / cells;
  const int n = cells + 1;
  std::vector<double> nu(n), q(n);
  for (int i = 0; i < n; ++i) nu[i] = nu_min + h * i;
  const double ai0 = airy(0.0).ai;
  for (int i = 0; i < n; ++i) q[i] = nu[i] <= 0.0 ? std::sqrt(ai0 * ai0 - nu[i] / 2.0) : airy(nu[i]).ai;
  q.front() = left_value(nu_min);
  q.back() = airy(nu_max).ai;

  std::vector<double> r, lower(n), diag(n), upper(n), rhs(n), trial(n);
  residuals(nu, q, h, r);
  double norm = sup(r);
  int it = 0;
  for (; it < 100 && norm > 1e-11; ++it) {
    // tridiagonal Jacobian of the scaled residuals
    for (int i = 1; i + 1 < n; ++i) {
      const double dm = 6.0 * q[i - 1] * q[i - 1] + nu[i - 1];
      const double d0 = 6.0 * q[i] * q[i] + nu[i];
      const double dp = 6.0 * q[i + 1] * q[i + 1] + nu[i + 1];
      lower[i] = 1.0 / (h * h) - dm / 12.0;
      diag[i] = -2.0 / (h * h) - 10.0 * d0 / 12.0;
      upper[i] = 1.0 / (h * h) - dp / 12.0;
      rhs[i] = -r[i];
    }
    // Thomas on the interior unknowns 1..n-2 (boundary values fixed)
    std::vector<double> c(n, 0.0), d(n, 0.0), dq(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) {
      const double low = i > 1 ? lower[i] : 0.0;
      const double den = diag[i] - low * c[i - 1];
      c[i] = upper[i] / den;
      d[i] = (rhs[i] - low * d[i - 1]) / den;
    }
    for (int i = n - 2; i >= 1; --i) dq[i] = d[i] - (i + 2 < n ? c[i] * dq[i + 1] : 0.0);
    double lambda = 1.0, next = norm;
    for (int half = 0; half < 30; ++half, lambda *= 0.5) {
      for (int i = 0; i < n; ++i) trial[i] = q[i] + lambda * dq[i];
      residuals(nu, trial, h, r);
      next = sup(r);
      if (next < norm || next < 1e-11) break;
    }
    if (!(next < norm) && !(next < 1e-11)) break;
    q = trial;
    norm = next;
  }
  if (!(norm <= 1e-8)) throw NotConverged("hastings_mcleod: collocation residual " + std::to_string(norm));
  for (double v : q)
    if (!(v > 0.0)) throw NotConverged("hastings_mcleod: left the positive branch");

  // fourth-order differences; the boundary slopes come from the boundary data
  std::vector<double> qp(n);
  qp.front() = left_slope(nu_min);
  qp.back() = airy(nu_max).aip;
  for (int i = 1; i + 1 < n; ++i) {
    if (i >= 2 && i + 2 < n)
      qp[i] = (-q[i + 2] + 8.0 * q[i + 1] - 8.0 * q[i - 1] + q[i - 2]) / (12.0 * h);
    else if (i == 1)
      qp[i] = (-3.0 * q[0] - 10.0 * q[1] + 18.0 * q[2] - 6.0 * q[3] + q[4]) / (12.0 * h);
    else
      qp[i] = (3.0 * q[i + 1] + 10.0 * q[i] - 18.0 * q[i - 1] + 6.0 * q[i - 2] - q[i - 3]) / (12.0 * h);
  }

  HMSolution s;
  s.step = h;
  s.residual = norm;
  s.newton_steps = it;
  s.nu_grid.assign(nu.rbegin(), nu.rend());
  s.q.assign(q.rbegin(), q.rend());
  s.q_prime.assign(qp.rbegin(), qp.rend());
  return s;
}

double hm_collocation_residual(const HMSolution& hm) {
  std::vector<double> nu(hm.nu_grid.rbegin(), hm.nu_grid.rend()), q(hm.q.rbegin(), hm.q.rend()), r;
  residuals(nu, q, hm.step, r);
  return sup(r);
}

namespace {

// index i with nu_grid[i] >= nu >= nu_grid[i+1]
std::size_t bracket(const HMSolution& hm, double nu) {
  if (!(nu <= hm.nu_max() + 1e-12 && nu >= hm.nu_min() - 1e-12))
    throw ValidationError("nu = " + std::to_string(nu) + " outside the Hastings-McLeod grid");
  const double t = (hm.nu_max() - nu) / hm.step;
  return std::min(hm.nu_grid.size() - 2, static_cast<std::size_t>(std::max(0.0, std::floor(t))));
}

}  // namespace

double HMSolution::q_at(double nu) const {
  const auto i = bracket(*this, nu);
  const double a = nu_grid[i + 1], h = nu_grid[i] - a, t = (nu - a) / h;
  const double y0 = q[i + 1], y1 = q[i], d0 = q_prime[i + 1] * h, d1 = q_prime[i] * h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * d1;
}

double HMSolution::q_prime_at(double nu) const {
  const auto i = bracket(*this, nu);
  const double a = nu_grid[i + 1], h = nu_grid[i] - a, t = (nu - a) / h;
  const double y0 = q[i + 1], y1 = q[i], d0 = q_prime[i + 1] * h, d1 = q_prime[i] * h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * d0 + (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * d1) / h;
}

nlohmann::json to_json(const HMSolution& hm) {
  return {{"nu_grid", hm.nu_grid}, {"q", hm.q}, {"q_prime", hm.q_prime}, {"step", hm.step}, {"residual", hm.residual}};
}

}  // namespace tmm
