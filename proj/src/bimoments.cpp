#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include "tmm/biorthogonal.hpp"
#include "tmm/errors.hpp"
#include "tmm/quadrature.hpp"

namespace tmm {

namespace {

std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}

unsigned digits10_of(int bits) { return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1; }

// Gauss-Legendre on [-1, 1] at the current mpfr precision, polished by
// Newton from the double-precision rule.
void mp_gauss_legendre(int n, std::vector<Real>& x, std::vector<Real>& w) {
  const auto seed = gauss_legendre(n);
  x.assign(n, Real(0));
  w.assign(n, Real(0));
  const Real eps = boost::multiprecision::pow(Real(2), -static_cast<int>(Real::default_precision() * 3.3));
  for (int i = 0; i < n; ++i) {
    Real t = seed.nodes[i], dp = 0;
    for (int it = 0; it < 12; ++it) {
      Real p0 = 1, p1 = t;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (t * p1 - p0) / (t * t - 1);
      const Real dx = p1 / dp;
      t -= dx;
      if (abs(dx) < eps) break;
    }
    Real p0 = 1, p1 = t;
    for (int k = 2; k <= n; ++k) {
      Real p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1;
    dp = n * (t * p1 - p0) / (t * t - 1);
    x[i] = t;
    w[i] = 2 / ((1 - t * t) * dp * dp);
  }
}

Real eval(const Polynomial& p, const Real& x) {
  Real s = 0;
  for (int k = p.degree(); k >= 0; --k) s = s * x + p.coeff(k);
  return s;
}

void check_weight(const PotentialPair& pp, int n_scale, int size) {
  auto confining = [](const Polynomial& p) { return p.degree() >= 2 && p.degree() % 2 == 0 && p.leading() > 0.0; };
  if (size < 1 || n_scale < 1) throw ValidationError("bimoments: size and n must be >= 1");
  if (size > 48) throw SizeTooLarge("bimoments: size " + std::to_string(size) + " > 48");
  if (!(pp.tau >= 0.0)) throw ValidationError("bimoments: tau must be >= 0");
  if (!confining(pp.v) || !confining(pp.w))
    throw NonConfiningWeight("V and W need even degree >= 2 and positive leading coefficients");
  if (pp.v.degree() == 2 && pp.w.degree() == 2 && 4.0 * pp.v.leading() * pp.w.leading() <= pp.tau * pp.tau)
    throw NonConfiningWeight("quadratic V, W with tau^2 >= 4 v2 w2: weight not integrable");
}

// Half-widths (Lx, Ly) such that |x|^j |y|^k times the weight, j, k < size,
// stays below 1e-33 of its maximum outside [-Lx, Lx] x [-Ly, Ly].
std::array<double, 2> truncation(const PotentialPair& pp, int n, int size) {
  const int deg = size - 1;
  auto phi = [&](double x, double y) {
    return deg * (std::log(std::max(1.0, std::abs(x))) + std::log(std::max(1.0, std::abs(y)))) -
           n * (pp.v(x) + pp.w(y) - pp.tau * x * y);
  };
  // global maximum over a box that surely holds it
  double top = -1e300, R = 2.0;
  for (; R < 128.0; R *= 1.5) {
    double inner = -1e300, edge = -1e300;
    const int m = 200;
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= m; ++j) {
        const double v = phi(-R + 2.0 * R * i / m, -R + 2.0 * R * j / m);
        inner = std::max(inner, v);
        if (i == 0 || j == 0 || i == m || j == m) edge = std::max(edge, v);
      }
    top = inner;
    if (edge < top - 80.0) break;
  }
  if (R >= 128.0) throw NonConfiningWeight("bimoments: weight does not decay on [-128, 128]^2");
  // shrink each axis separately
  auto edge_max = [&](double L, bool x_axis) {
    double e = -1e300;
    const int m = 2000;
    for (int i = 0; i <= m; ++i) {
      const double t = -R + 2.0 * R * i / m;
      e = std::max(e, x_axis ? std::max(phi(L, t), phi(-L, t)) : std::max(phi(t, L), phi(t, -L)));
    }
    return e;
  };
  std::array<double, 2> out{};
  for (int axis = 0; axis < 2; ++axis) {
    double L = R;
    while (L > 0.5 && edge_max(L / 1.05, axis == 0) < top - 76.0) L /= 1.05;
    out[axis] = L;
  }
  return out;
}

// Panels of a few weight widths, narrow enough that the coupling exponent
// varies by at most ~24 across one.
int panels_for(const PotentialPair& pp, int n, double own, double other) {
  double w = std::min(1.0, 2.0 / std::sqrt(static_cast<double>(n)));
  if (pp.tau > 0.0) w = std::min(w, 24.0 / (n * pp.tau * other));
  return std::max(2, static_cast<int>(std::ceil(2.0 * own / w)));
}

}  // namespace

PrecisionScope::PrecisionScope(int bits) {
  precision_mutex().lock();
  saved_ = Real::default_precision();
  Real::default_precision(digits10_of(bits));
}

PrecisionScope::~PrecisionScope() {
  Real::default_precision(saved_);
  precision_mutex().unlock();
}

BimomentMatrix bimoments(const PotentialPair& pp, int n_scale, int size, int precision_bits) {
  return bimoments(pp, n_scale, size, precision_bits, BimomentRule{});
}

BimomentMatrix bimoments(const PotentialPair& pp, int n_scale, int size, int precision_bits, const BimomentRule& rule) {
  check_weight(pp, n_scale, size);
  if (rule.points < 2 || !(rule.density > 0.0)) throw ValidationError("bimoments: bad quadrature rule");
  if (precision_bits < 53) throw ValidationError("bimoments: precision_bits must be >= 53");
  if (size > 16) precision_bits = std::max(precision_bits, 256);
  PrecisionScope scope(precision_bits);

  BimomentMatrix b;
  b.size = size;
  b.n_scale = n_scale;
  b.precision_bits = precision_bits;
  b.pp = pp;
  const auto lim = truncation(pp, n_scale, size);
  b.half_width = std::max(lim[0], lim[1]);
  const int px = static_cast<int>(std::ceil(rule.density * panels_for(pp, n_scale, lim[0], lim[1])));
  const int py = static_cast<int>(std::ceil(rule.density * panels_for(pp, n_scale, lim[1], lim[0])));

  std::vector<Real> rx, rw;
  mp_gauss_legendre(rule.points, rx, rw);
  const int m = rule.points;
  // composite nodes on [-L, L]; mids holds the panel centres
  auto layout = [&](double half, int panels, std::vector<Real>& t, std::vector<Real>& wt, std::vector<Real>& mids) {
    t.resize(panels * m);
    wt.resize(panels * m);
    mids.resize(panels);
    const Real L = half, h = 2 * L / panels;
    for (int p = 0; p < panels; ++p) {
      mids[p] = -L + h * (p + Real(0.5));
      for (int i = 0; i < m; ++i) {
        t[p * m + i] = mids[p] + h / 2 * rx[i];
        wt[p * m + i] = h / 2 * rw[i];
      }
    }
    return Real(h / 2);
  };
  std::vector<Real> xs, xw, xmid, ys, yw, ymid;
  layout(lim[0], px, xs, xw, xmid);
  const Real hy = layout(lim[1], py, ys, yw, ymid);
  const int nx = px * m, ny = py * m;
  b.nodes = std::max(nx, ny);

  const Real n = n_scale, tau = pp.tau;
  std::vector<Real> ex(nx), ey(ny);
  for (int i = 0; i < nx; ++i) ex[i] = xw[i] * exp(-n * eval(pp.v, xs[i]));
  for (int l = 0; l < ny; ++l) ey[l] = yw[l] * exp(-n * eval(pp.w, ys[l]));
  auto powers = [&](const std::vector<Real>& t) {
    std::vector<Real> pw(t.size() * size);
    for (std::size_t i = 0; i < t.size(); ++i) {
      pw[i * size] = 1;
      for (int k = 1; k < size; ++k) pw[i * size + k] = pw[i * size + k - 1] * t[i];
    }
    return pw;
  };
  const auto pwx = powers(xs), pwy = powers(ys);

  // inner[i][k] = sum_l ey_l y_l^k exp(n tau x_i y_l), with the exponential
  // split as exp(n tau x_i mid_p) exp(n tau x_i (h/2) r)
  std::vector<Real> inner(static_cast<std::size_t>(nx) * size);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < nx; ++i) {
    std::vector<Real> acc(size, Real(0)), er(m, Real(1));
    if (pp.tau != 0.0)
      for (int r = 0; r < m; ++r) er[r] = exp(n * tau * xs[i] * hy * rx[r]);
    for (int p = 0; p < py; ++p) {
      const Real base = pp.tau != 0.0 ? Real(exp(n * tau * xs[i] * ymid[p])) : Real(1);
      for (int r = 0; r < m; ++r) {
        const int l = p * m + r;
        const Real f = base * er[r] * ey[l];
        for (int k = 0; k < size; ++k) acc[k] += f * pwy[static_cast<std::size_t>(l) * size + k];
      }
    }
    for (int k = 0; k < size; ++k) inner[static_cast<std::size_t>(i) * size + k] = acc[k];
  }

  b.entries.assign(static_cast<std::size_t>(size) * size, Real(0));
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < size; ++j) {
      const Real a = ex[i] * pwx[static_cast<std::size_t>(i) * size + j];
      for (int k = 0; k < size; ++k) b.at(j, k) += a * inner[static_cast<std::size_t>(i) * size + k];
    }
  // the rule is symmetric, so odd-parity entries are rounding noise for even weights
  if (pp.v.is_even() && pp.w.is_even())
    for (int j = 0; j < size; ++j)
      for (int k = 0; k < size; ++k)
        if ((j + k) % 2) b.at(j, k) = 0;
  return b;
}

}  // namespace tmm
