#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "tmm/biorthogonal.hpp"
#include "tmm/errors.hpp"
#include "tmm/quadrature.hpp"

namespace tmm {

namespace {

Polynomial rounded(const std::vector<Real>& c) {
  std::vector<double> d(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) d[i] = c[i].convert_to<double>();
  return Polynomial(d);
}

// max |P B Q^T - D| / sqrt(|d_j d_k|) with B from an independent rule.
double reintegration_residual(const BimomentMatrix& b, const BiorthogonalFamily& f) {
  BimomentRule alt;
  alt.points = 40;
  alt.density = 1.3;
  const auto b2 = bimoments(b.pp, b.n_scale, b.size, b.precision_bits, alt);
  PrecisionScope scope(b.precision_bits);
  const int n = b.size;
  Real worst = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Real s = 0;
      for (int a = 0; a <= j; ++a) {
        Real row = 0;
        for (int c = 0; c <= k; ++c) row += b2.at(a, c) * f.q_mp[k][c];
        s += f.p_mp[j][a] * row;
      }
      if (j == k) s -= f.h_sq_mp[k];
      const Real r = abs(s) / sqrt(abs(f.h_sq_mp[j] * f.h_sq_mp[k]));
      if (r > worst) worst = r;
    }
  return worst.convert_to<double>();
}

// Integral of sum_k f_k(t) exp(h(t)) over R for a confining exponent h.
// The window is where h + deg log|t| is within 70 of its maximum; panels are
// doubled until the values settle.
std::vector<double> integrate_weighted(const std::function<void(double, std::vector<double>&)>& f,
                                       const std::function<double(double)>& h, int deg, int count) {
  auto phi = [&](double t) { return h(t) + deg * std::log(std::max(1.0, std::abs(t))); };
  double lo = -2.0, hi = 2.0, top = -1e300;
  for (int grow = 0;; ++grow) {
    if (grow > 40) throw QuadratureNotConverged("integrand does not decay");
    const int m = 4000;
    top = -1e300;
    for (int i = 0; i <= m; ++i) top = std::max(top, phi(lo + (hi - lo) * i / m));
    const bool lo_ok = phi(lo) < top - 70.0, hi_ok = phi(hi) < top - 70.0;
    if (lo_ok && hi_ok) break;
    if (!lo_ok) lo -= 0.5 * (hi - lo);
    if (!hi_ok) hi += 0.5 * (hi - lo);
  }
  // shrink to the significant part
  {
    const int m = 4000;
    const double step = (hi - lo) / m;
    int first = m, last = 0;
    for (int i = 0; i <= m; ++i)
      if (phi(lo + step * i) >= top - 70.0) {
        first = std::min(first, i);
        last = std::max(last, i);
      }
    const double a = lo + step * std::max(0, first - 1), b = lo + step * std::min(m, last + 1);
    lo = a;
    hi = b;
  }
  const double shift = top;  // scale out exp(top) to avoid overflow
  std::vector<double> prev, vals(count), buf(count), mag(count);
  for (int panels = 8; panels <= 2048; panels *= 2) {
    std::vector<double> edges(panels + 1);
    for (int i = 0; i <= panels; ++i) edges[i] = lo + (hi - lo) * i / panels;
    const auto rule = composite_gauss_legendre(edges, 24);
    std::fill(vals.begin(), vals.end(), 0.0);
    std::fill(mag.begin(), mag.end(), 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = rule.nodes[i];
      const double e = rule.weights[i] * std::exp(h(t) - shift);
      f(t, buf);
      for (int k = 0; k < count; ++k) {
        vals[k] += e * buf[k];
        mag[k] += std::abs(e * buf[k]);
      }
    }
    if (!prev.empty()) {
      bool ok = true;
      for (int k = 0; k < count; ++k)
        if (std::abs(vals[k] - prev[k]) > 1e-13 * mag[k]) ok = false;
      if (ok) {
        for (auto& v : vals) v *= std::exp(shift);
        return vals;
      }
    }
    prev = vals;
  }
  throw QuadratureNotConverged("weighted integral did not settle under panel doubling");
}

}  // namespace

BiorthogonalFamily biorthogonal_family(const BimomentMatrix& b, bool verify) {
  const int n = b.size;
  BiorthogonalFamily f;
  f.size = n;
  f.n_scale = b.n_scale;
  f.precision_bits = b.precision_bits;
  f.pp = b.pp;
  {
    PrecisionScope scope(b.precision_bits);
    // Doolittle LDU without pivoting: B = L D U.
    std::vector<Real> l(static_cast<std::size_t>(n) * n, Real(0)), u(static_cast<std::size_t>(n) * n, Real(0)), d(n);
    auto L = [&](int i, int j) -> Real& { return l[static_cast<std::size_t>(i) * n + j]; };
    auto U = [&](int i, int j) -> Real& { return u[static_cast<std::size_t>(i) * n + j]; };
    const Real tiny = boost::multiprecision::pow(Real(2), -(3 * b.precision_bits) / 4);
    for (int k = 0; k < n; ++k) {
      Real s = b.at(k, k), scale = abs(b.at(k, k));
      for (int m = 0; m < k; ++m) {
        const Real t = L(k, m) * d[m] * U(m, k);
        s -= t;
        scale = std::max(scale, Real(abs(t)));
      }
      if (abs(s) <= tiny * scale)
        throw SingularMinor("leading minor " + std::to_string(k + 1) + " vanishes at " +
                            std::to_string(b.precision_bits) + " bits; raise precision_bits");
      d[k] = s;
      L(k, k) = 1;
      U(k, k) = 1;
      for (int i = k + 1; i < n; ++i) {
        Real a = b.at(i, k), c = b.at(k, i);
        for (int m = 0; m < k; ++m) {
          a -= L(i, m) * d[m] * U(m, k);
          c -= L(k, m) * d[m] * U(m, i);
        }
        L(i, k) = a / d[k];
        U(k, i) = c / d[k];
      }
    }
    // p_j = row j of L^{-1}; q_k = column k of U^{-1}.
    f.p_mp.assign(n, {});
    f.q_mp.assign(n, {});
    for (int j = 0; j < n; ++j) {
      std::vector<Real> row(j + 1, Real(0));
      row[j] = 1;
      for (int c = j - 1; c >= 0; --c) {
        Real s = 0;
        for (int m = c + 1; m <= j; ++m) s -= row[m] * L(m, c);
        row[c] = s;
      }
      f.p_mp[j] = row;
      std::vector<Real> col(j + 1, Real(0));
      col[j] = 1;
      for (int r = j - 1; r >= 0; --r) {
        Real s = 0;
        for (int m = r + 1; m <= j; ++m) s -= U(r, m) * col[m];
        col[r] = s;
      }
      f.q_mp[j] = col;
    }
    f.h_sq_mp = d;
    for (int j = 0; j < n; ++j) {
      f.p.push_back(rounded(f.p_mp[j]));
      f.q.push_back(rounded(f.q_mp[j]));
      f.h_sq.push_back(d[j].convert_to<double>());
    }
  }
  if (verify) {
    f.residual = reintegration_residual(b, f);
    if (!(f.residual <= 1e-8))
      throw QuadratureNotConverged("biorthogonality re-check residual " + std::to_string(f.residual) + " > 1e-8");
  }
  return f;
}

std::vector<std::complex<double>> polynomial_zeros(const Polynomial& p) {
  const int d = p.degree();
  if (d < 1) return {};
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) c(i, d - 1) = -p.coeff(i) / p.leading();
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
  std::vector<std::complex<double>> z(es.eigenvalues().data(), es.eigenvalues().data() + d);
  std::sort(z.begin(), z.end(), [](auto a, auto b) { return a.real() < b.real(); });
  return z;
}

ZeroReport check_zeros(const std::vector<Polynomial>& family, double tol) {
  ZeroReport r;
  r.min_gap = 1e300;
  std::vector<std::vector<double>> zs;
  for (const auto& p : family) {
    const auto z = polynomial_zeros(p);
    double scale = 1.0;
    for (const auto& v : z) scale = std::max(scale, std::abs(v));
    std::vector<double> re;
    for (const auto& v : z) {
      r.max_imag = std::max(r.max_imag, std::abs(v.imag()) / scale);
      re.push_back(v.real());
    }
    for (std::size_t i = 1; i < re.size(); ++i) {
      const double gap = re[i] - re[i - 1];
      r.min_gap = std::min(r.min_gap, gap / scale);
      if (gap <= tol * scale) r.simple = false;
    }
    zs.push_back(re);
  }
  if (r.max_imag > tol) r.real = false;
  for (std::size_t k = 0; k + 1 < zs.size(); ++k) {
    const auto& a = zs[k];
    const auto& b = zs[k + 1];
    if (b.size() != a.size() + 1) continue;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i]), std::abs(b[i + 1])});
      if (!(b[i] < a[i] - tol * scale && a[i] < b[i + 1] - tol * scale)) r.interlacing = false;
    }
  }
  if (r.min_gap == 1e300) r.min_gap = 0.0;
  return r;
}

double w_function(double x, int j, const PotentialPair& pp, int n_scale) {
  if (j < 0) throw ValidationError("w_function: j must be >= 0");
  const double n = n_scale;
  const auto v = integrate_weighted([&](double y, std::vector<double>& out) { out[0] = std::pow(y, j); },
                                    [&](double y) { return -n * (pp.w(y) + pp.v(x) - pp.tau * x * y); }, j, 1);
  return v[0];
}

KernelKind kernel_kind(const std::string& label) {
  if (label == "K11" || label == "11") return KernelKind::K11;
  if (label == "K12" || label == "12") return KernelKind::K12;
  if (label == "K21" || label == "21") return KernelKind::K21;
  if (label == "K22" || label == "22") return KernelKind::K22;
  throw ValidationError("unknown kernel '" + label + "' (expected K11, K12, K21 or K22)");
}

KernelSet::KernelSet(BiorthogonalFamily family) : f_(std::move(family)) {
  if (f_.size < 1) throw ValidationError("KernelSet: empty family");
}

double KernelSet::weight(double x, double y) const {
  const auto& pp = f_.pp;
  return std::exp(-f_.n_scale * (pp.v(x) + pp.w(y) - pp.tau * x * y));
}

std::vector<double> KernelSet::big_p(double y) const {
  const auto& pp = f_.pp;
  const double n = f_.n_scale;
  return integrate_weighted(
      [&](double x, std::vector<double>& out) {
        for (int k = 0; k < f_.size; ++k) out[k] = f_.p[k](x);
      },
      [&](double x) { return -n * (pp.w(y) + pp.v(x) - pp.tau * x * y); }, f_.size - 1, f_.size);
}

std::vector<double> KernelSet::big_q(double x) const {
  const auto& pp = f_.pp;
  const double n = f_.n_scale;
  return integrate_weighted(
      [&](double y, std::vector<double>& out) {
        for (int k = 0; k < f_.size; ++k) out[k] = f_.q[k](y);
      },
      [&](double y) { return -n * (pp.w(y) + pp.v(x) - pp.tau * x * y); }, f_.size - 1, f_.size);
}

double KernelSet::operator()(KernelKind which, double u, double v) const {
  double s = 0.0;
  switch (which) {
    case KernelKind::K11: {
      const auto q = big_q(v);
      for (int k = 0; k < f_.size; ++k) s += f_.p[k](u) * q[k] / f_.h_sq[k];
      return s;
    }
    case KernelKind::K12:
      for (int k = 0; k < f_.size; ++k) s += f_.p[k](u) * f_.q[k](v) / f_.h_sq[k];
      return s;
    case KernelKind::K21: {
      // u = y, v = x
      const auto p = big_p(u);
      const auto q = big_q(v);
      for (int k = 0; k < f_.size; ++k) s += p[k] * q[k] / f_.h_sq[k];
      return s - weight(v, u);
    }
    case KernelKind::K22: {
      const auto p = big_p(u);
      for (int k = 0; k < f_.size; ++k) s += p[k] * f_.q[k](v) / f_.h_sq[k];
      return s;
    }
  }
  return s;
}

std::vector<int> KernelSet::block_sizes() const {
  const int dw = d_w(), n = f_.size;
  std::vector<int> out;
  for (int j = 0; j <= dw - 2; ++j) out.push_back((n + dw - j - 2) / (dw - 1));
  return out;
}

double kernels(const KernelSet& ks, KernelKind which, double u, double v) { return ks(which, u, v); }

double correlation_det(const KernelSet& ks, const std::vector<double>& points) {
  const int m = static_cast<int>(points.size());
  if (m == 0) return 1.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (points[i] == points[j]) throw ValidationError("correlation_det: points must be distinct");
  const auto& f = ks.family();
  std::vector<std::vector<double>> q(m);
  for (int j = 0; j < m; ++j) q[j] = ks.big_q(points[j]);
  Eigen::MatrixXd k(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int c = 0; c < f.size; ++c) s += f.p[c](points[i]) * q[j][c] / f.h_sq[c];
      k(i, j) = s;
    }
  return k.determinant();
}

double coefficient_gap(const std::vector<Polynomial>& a, const std::vector<Polynomial>& b) {
  if (a.size() != b.size()) throw ValidationError("coefficient_gap: families differ in size");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double scale = 0.0;
    for (double c : b[k].coeffs()) scale = std::max(scale, std::abs(c));
    const int d = std::max(a[k].degree(), b[k].degree());
    for (int i = 0; i <= d; ++i) worst = std::max(worst, std::abs(a[k].coeff(i) - b[k].coeff(i)) / scale);
  }
  return worst;
}

nlohmann::json to_json(const BiorthogonalFamily& f) {
  nlohmann::json p = nlohmann::json::array(), q = nlohmann::json::array();
  for (const auto& x : f.p) p.push_back(x.coeffs());
  for (const auto& x : f.q) q.push_back(x.coeffs());
  return {{"size", f.size},   {"n_scale", f.n_scale}, {"p", p}, {"q", q}, {"h_sq", f.h_sq},
          {"tau", f.pp.tau}, {"precision_bits", f.precision_bits}, {"residual", f.residual}};
}

}  // namespace tmm
