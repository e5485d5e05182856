#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

#include "tmm/errors.hpp"
#include "tmm/rh.hpp"

namespace tmm {

namespace {

constexpr double pi = std::numbers::pi;
using M2 = Eigen::Matrix2cd;
const cplx I1(0.0, 1.0);

M2 to_eigen(const Mat2& m) {
  M2 e;
  e << m[0], m[1], m[2], m[3];
  return e;
}
Mat2 from_eigen(const M2& e) { return {e(0, 0), e(0, 1), e(1, 0), e(1, 1)}; }

M2 sigma3() {
  M2 s = M2::Zero();
  s(0, 0) = 1.0;
  s(1, 1) = -1.0;
  return s;
}
M2 offdiag(const M2& m) {
  M2 o = m;
  o(0, 0) = o(1, 1) = 0.0;
  return o;
}
M2 diagonal(const M2& m) {
  M2 d = M2::Zero();
  d(0, 0) = m(0, 0);
  d(1, 1) = m(1, 1);
  return d;
}

// Lax matrix in zeta with off-diagonal data beta = gamma = q.
struct Lax {
  double q, qp, nu;
  M2 at(cplx z) const {
    M2 a;
    const cplx d = -I1 * (4.0 * z * z + nu + 2.0 * q * q);
    a << d, 4.0 * z * q + 2.0 * I1 * qp, 4.0 * z * q - 2.0 * I1 * qp, -d;
    return a;
  }
};

double norm_max(const M2& m) { return m.cwiseAbs().maxCoeff(); }

struct Start {
  double radius;
  double error;
  M2 value;  // Psi at radius * e^{i angle}
};

// Truncate the formal series at its smallest term and return the first
// radius (in steps of 1/2) where that term is below the target.
Start start_value(const std::vector<Mat2>& ms, double nu, double angle, double fixed_radius) {
  auto attempt = [&](double r) {
    const cplx z = std::polar(r, angle);
    int stop = static_cast<int>(ms.size()) - 1;
    double best = 1e300;
    for (int k = 1; k < static_cast<int>(ms.size()); ++k) {
      const double t = norm_max(to_eigen(ms[k])) * std::pow(r, -k);
      if (t < best) {
        best = t;
        stop = k;
      } else if (t > 4.0 * best) {
        break;
      }
    }
    M2 phi = M2::Zero();
    for (int k = 0; k < stop; ++k) phi += to_eigen(ms[k]) * std::pow(z, -k);
    const cplx th = 4.0 / 3.0 * z * z * z + nu * z;
    M2 e = M2::Zero();
    e(0, 0) = std::exp(-I1 * th);
    e(1, 1) = std::exp(I1 * th);
    return Start{r, best, phi * e};
  };
  if (fixed_radius > 0.0) {
    auto s = attempt(fixed_radius);
    if (s.error > 1e-10) throw RadiusInsufficient("psi: series error " + std::to_string(s.error) + " at the requested radius");
    return s;
  }
  for (double r = 5.0; r <= 14.0; r += 0.5) {
    auto s = attempt(r);
    if (s.error <= 1e-12) return s;
  }
  auto s = attempt(14.0);
  if (s.error > 1e-10) throw RadiusInsufficient("psi: asymptotic series does not reach 1e-10 for radius <= 14");
  return s;
}

using State = std::array<double, 8>;

// Transport Y along z(t), t in [0, 1].
template <class Path>
M2 transport(const M2& y0, const Lax& lax, Path path, double rtol) {
  namespace ode = boost::numeric::odeint;
  State s;
  for (int i = 0; i < 4; ++i) {
    s[2 * i] = y0(i / 2, i % 2).real();
    s[2 * i + 1] = y0(i / 2, i % 2).imag();
  }
  auto rhs = [&](const State& x, State& dx, double t) {
    const auto [z, dz] = path(t);
    M2 y;
    y << cplx(x[0], x[1]), cplx(x[2], x[3]), cplx(x[4], x[5]), cplx(x[6], x[7]);
    const M2 d = lax.at(z) * y * dz;
    for (int i = 0; i < 4; ++i) {
      dx[2 * i] = d(i / 2, i % 2).real();
      dx[2 * i + 1] = d(i / 2, i % 2).imag();
    }
  };
  auto stepper = ode::make_controlled(rtol * 1e-2, rtol, ode::runge_kutta_fehlberg78<State>());
  ode::integrate_adaptive(stepper, rhs, s, 0.0, 1.0, 1e-3);
  M2 y;
  y << cplx(s[0], s[1]), cplx(s[2], s[3]), cplx(s[4], s[5]), cplx(s[6], s[7]);
  return y;
}

double default_start(PsiSector s) {
  switch (s) {
    case PsiSector::I: return 0.0;
    case PsiSector::II: return pi / 3;
    case PsiSector::III: return pi;
    case PsiSector::IV: return 5 * pi / 3;
  }
  return 0.0;
}

// anti-Stokes directions zeta^3 real inside each sector
bool start_in_sector(double angle, PsiSector s) {
  const double centre = default_start(s) + (s == PsiSector::II ? pi / 6 : s == PsiSector::IV ? -pi / 6 : 0.0);
  return std::abs(std::remainder(angle - centre, 2 * pi)) < pi / 3 - 1e-9;
}

}  // namespace

std::vector<Mat2> psi_series(double q, double qp, double nu, int terms) {
  const M2 s3 = sigma3();
  M2 b0;
  b0 << 0.0, q, q, 0.0;
  M2 a0off;
  a0off << 0.0, 2.0 * I1 * qp, -2.0 * I1 * qp, 0.0;
  const M2 a0r = -2.0 * I1 * q * q * s3 + a0off;
  std::vector<M2> d{M2::Identity()}, o{M2::Zero()};
  auto g = [](const std::vector<M2>& v, int i) -> M2 { return i >= 0 && i < static_cast<int>(v.size()) ? v[i] : M2::Zero(); };
  const cplx mi8 = -I1 / 8.0;
  // off-diagonal part of level j+1 from the diagonal part of level j
  auto o_next = [&](int j, const M2& dj) -> M2 {
    const M2 prev = g(d, j - 1) + g(o, j - 1);
    const M2 rhs = double(j - 2) * g(o, j - 2) + 4.0 * b0 * dj - 2.0 * I1 * nu * s3 * g(o, j - 1) + offdiag(a0r * prev);
    return mi8 * s3 * rhs;
  };
  o.push_back(o_next(0, d[0]));
  for (int j = 1; j < terms; ++j) {
    // the diagonal condition is affine in D_j: probe and solve
    auto cond = [&](const M2& dj) -> M2 {
      const M2 oj1 = o_next(j, dj);
      const M2 mj = dj + o[j];
      const M2 x = double(j - 1) * g(o, j - 1) - 2.0 * I1 * nu * s3 * o[j] + offdiag(a0r * mj);
      return -double(j) * dj - diagonal(4.0 * b0 * (mi8 * s3 * x) + a0off * oj1);
    };
    const M2 c = cond(M2::Zero());
    Eigen::Matrix2cd lin;
    for (int a = 0; a < 2; ++a) {
      M2 e = M2::Zero();
      e(a, a) = 1.0;
      const M2 r = cond(e) - c;
      lin(0, a) = r(0, 0);
      lin(1, a) = r(1, 1);
    }
    const Eigen::Vector2cd sol = lin.fullPivLu().solve(Eigen::Vector2cd(-c(0, 0), -c(1, 1)));
    M2 dj = M2::Zero();
    dj(0, 0) = sol(0);
    dj(1, 1) = sol(1);
    d.push_back(dj);
    o.push_back(o_next(j, dj));
  }
  std::vector<Mat2> out;
  for (int k = 0; k < terms; ++k) out.push_back(from_eigen(d[k] + o[k]));
  return out;
}

PsiSector psi_sector(cplx zeta) {
  if (zeta == cplx(0.0)) return PsiSector::I;
  double a = std::arg(zeta);
  if (a < 0) a += 2 * pi;
  if (a < pi / 6 || a >= 11 * pi / 6) return PsiSector::I;
  if (a < 5 * pi / 6) return PsiSector::II;
  if (a < 7 * pi / 6) return PsiSector::III;
  return PsiSector::IV;
}

PsiValue psi_in_sector(cplx zeta, double nu, const HMSolution& hm, PsiSector sector, const PsiOptions& opt) {
  const double q = hm.q_at(nu), qp = hm.q_prime_at(nu);
  const Lax lax{q, qp, nu};
  const double phi = opt.start_angle >= 0.0 ? opt.start_angle : default_start(sector);
  if (!start_in_sector(phi, sector)) throw ValidationError("psi: start direction outside the sector");
  if (std::abs(std::remainder(3.0 * phi, pi)) > 1e-9) throw ValidationError("psi: start direction must be anti-Stokes");
  const auto ms = psi_series(q, qp, nu);
  const Start st = start_value(ms, nu, phi, opt.radius);
  // radial in along the start ray, an arc at radius <= 1 (the exponentials
  // stay O(1) there, so the turn costs no accuracy), then radial out
  const double r = std::abs(zeta), R = st.radius, rho = std::min(r, 1.0);
  const double turn = r > 0.0 ? std::remainder(std::arg(zeta) - phi, 2 * pi) : 0.0;
  auto radial = [&](const M2& y0, double from, double to, double angle) {
    const cplx dir = std::polar(1.0, angle);
    return transport(y0, lax, [&](double t) { return std::pair<cplx, cplx>{(from + (to - from) * t) * dir, (to - from) * dir}; },
                     opt.rtol);
  };
  M2 y = radial(st.value, R, rho, phi);
  if (turn != 0.0 && rho > 0.0)
    y = transport(y, lax,
                  [&](double t) {
                    const cplx z = std::polar(rho, phi + turn * t);
                    return std::pair<cplx, cplx>{z, I1 * turn * z};
                  },
                  opt.rtol);
  if (r > rho) y = radial(y, rho, r, phi + turn);
  PsiValue v;
  v.zeta = zeta;
  v.nu = nu;
  v.matrix = from_eigen(y);
  v.sector = sector;
  v.radius = R;
  v.series_error = st.error;
  if (std::abs(v.det() - 1.0) > 1e-8)
    throw NotConverged("psi: det deviates from 1 by " + std::to_string(std::abs(v.det() - 1.0)));
  return v;
}

PsiValue psi_solve(cplx zeta, double nu, const HMSolution& hm, const PsiOptions& opt) {
  if (zeta != cplx(0.0)) {
    const double a = std::arg(zeta);
    const double rays[4] = {pi / 6, 5 * pi / 6, 7 * pi / 6, 11 * pi / 6};
    for (double ray : rays)
      if (std::abs(std::remainder(a - ray, 2 * pi)) < 0.05)
        throw SectorBoundaryTooClose("psi: zeta within 0.05 rad of a jump ray");
  }
  return psi_in_sector(zeta, nu, hm, psi_sector(zeta), opt);
}

cplx psi_q_probe(double zeta, double nu, const HMSolution& hm) {
  if (!(zeta > 0.0)) throw ValidationError("psi_q_probe: zeta must be positive");
  const auto v = psi_solve(zeta, nu, hm);
  const double th = 4.0 / 3.0 * zeta * zeta * zeta + nu * zeta;
  return zeta * v.matrix[1] * std::exp(-I1 * th);
}

KpiiValue kpii_eval(double x, double y, double nu, const HMSolution& hm, bool use_adjugate) {
  if (x == y) {
    const double eps = 1e-4;
    const auto a = kpii_eval(x, y + eps, nu, hm, use_adjugate), b = kpii_eval(x, y - eps, nu, hm, use_adjugate);
    return {0.5 * (a.value + b.value), std::max(a.imag, b.imag)};
  }
  const M2 px = to_eigen(psi_solve(x, nu, hm).matrix), py = to_eigen(psi_solve(y, nu, hm).matrix);
  M2 inv;
  if (use_adjugate)
    inv << py(1, 1), -py(0, 1), -py(1, 0), py(0, 0);
  else
    inv = py.inverse();
  const M2 m = inv * px;
  const cplx num = (m(0, 0) + m(0, 1)) - (m(1, 0) + m(1, 1));
  const cplx k = num / (2.0 * pi * I1 * (x - y));
  return {k.real(), std::abs(k.imag())};
}

double kpii_kernel(double x, double y, double nu, const HMSolution& hm) {
  const auto k = kpii_eval(x, y, nu, hm);
  if (k.imag > 1e-6) throw NotConverged("kpii: imaginary part " + std::to_string(k.imag) + " > 1e-6");
  return k.value;
}

}  // namespace tmm
