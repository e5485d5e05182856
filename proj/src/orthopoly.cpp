#include <algorithm>
#include <cmath>

#include "tmm/biorthogonal.hpp"
#include "tmm/errors.hpp"
#include "tmm/quadrature.hpp"

namespace tmm {

namespace {

// Window outside which t^{2 size} exp(-n V(t)) is below 1e-40 of its peak.
std::pair<double, double> window(const Polynomial& v, int n, int size) {
  auto phi = [&](double t) { return 2.0 * size * std::log(std::max(1.0, std::abs(t))) - n * v(t); };
  double lo = -1.0, hi = 1.0;
  for (int grow = 0; grow < 60; ++grow) {
    double top = -1e300;
    const int m = 4000;
    for (int i = 0; i <= m; ++i) top = std::max(top, phi(lo + (hi - lo) * i / m));
    const bool lo_ok = phi(lo) < top - 92.0, hi_ok = phi(hi) < top - 92.0;
    if (lo_ok && hi_ok) return {lo, hi};
    if (!lo_ok) lo *= 1.2;
    if (!hi_ok) hi *= 1.2;
  }
  throw ValidationError("orthogonal_family: weight does not decay");
}

}  // namespace

OrthogonalFamily orthogonal_family(const Polynomial& v, int n_scale, int size) {
  if (v.degree() < 2 || v.degree() % 2 != 0 || v.leading() <= 0.0)
    throw NonConfiningWeight("V must have even degree >= 2 and positive leading coefficient");
  if (size < 1 || n_scale < 1) throw ValidationError("orthogonal_family: size and n must be >= 1");
  const auto [lo, hi] = window(v, n_scale, size);
  const int panels = std::max(64, 4 * size);
  std::vector<double> edges(panels + 1);
  for (int i = 0; i <= panels; ++i) edges[i] = lo + (hi - lo) * i / panels;
  const auto rule = composite_gauss_legendre(edges, 32);
  const int m = static_cast<int>(rule.nodes.size());
  if (size > m / 2) throw ValidationError("orthogonal_family: size too large for the discretization");

  OrthogonalFamily f;
  f.v = v;
  f.n_scale = n_scale;
  std::vector<double> sw(m);
  double mass = 0.0;
  for (int i = 0; i < m; ++i) {
    const double w = rule.weights[i] * std::exp(-n_scale * v(rule.nodes[i]));
    mass += w;
    sw[i] = std::sqrt(w);
  }
  f.mass = mass;

  // Lanczos on diag(nodes) started from sqrt(weights).
  std::vector<std::vector<double>> u;
  u.emplace_back(m);
  for (int i = 0; i < m; ++i) u[0][i] = sw[i] / std::sqrt(mass);
  f.b.push_back(0.0);
  for (int k = 0; k < size; ++k) {
    double a = 0.0;
    for (int i = 0; i < m; ++i) a += rule.nodes[i] * u[k][i] * u[k][i];
    f.a.push_back(a);
    if (k + 1 == size) break;
    std::vector<double> r(m);
    const double sb = std::sqrt(f.b[k]);
    for (int i = 0; i < m; ++i) r[i] = (rule.nodes[i] - a) * u[k][i] - (k > 0 ? sb * u[k - 1][i] : 0.0);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j <= k; ++j) {
        double dot = 0.0;
        for (int i = 0; i < m; ++i) dot += r[i] * u[j][i];
        for (int i = 0; i < m; ++i) r[i] -= dot * u[j][i];
      }
    double nr = 0.0;
    for (double x : r) nr += x * x;
    f.b.push_back(nr);
    const double s = 1.0 / std::sqrt(nr);
    for (auto& x : r) x *= s;
    u.push_back(std::move(r));
  }
  return f;
}

std::vector<Polynomial> OrthogonalFamily::monic() const {
  std::vector<Polynomial> out;
  const int size = static_cast<int>(a.size());
  Polynomial prev, cur({1.0});
  for (int k = 0; k < size; ++k) {
    out.push_back(cur);
    Polynomial next = Polynomial::monomial(1) * cur - cur * a[k];
    if (k > 0) next -= prev * b[k];
    prev = cur;
    cur = next;
  }
  return out;
}

std::vector<double> OrthogonalFamily::h_sq() const {
  std::vector<double> h;
  double s = mass;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k > 0) s *= b[k];
    h.push_back(s);
  }
  return h;
}

std::vector<double> OrthogonalFamily::orthonormal(double x) const {
  const int size = static_cast<int>(a.size());
  std::vector<double> phi(size);
  phi[0] = 1.0 / std::sqrt(mass);
  if (size > 1) phi[1] = (x - a[0]) * phi[0] / std::sqrt(b[1]);
  for (int k = 1; k + 1 < size; ++k)
    phi[k + 1] = ((x - a[k]) * phi[k] - std::sqrt(b[k]) * phi[k - 1]) / std::sqrt(b[k + 1]);
  return phi;
}

double one_matrix_kernel(const OrthogonalFamily& f, double x, double y) {
  const auto px = f.orthonormal(x), py = f.orthonormal(y);
  double s = 0.0;
  for (std::size_t k = 0; k < px.size(); ++k) s += px[k] * py[k];
  return std::exp(-0.5 * f.n_scale * (f.v(x) + f.v(y))) * s;
}

double one_matrix_kernel(const Polynomial& v, int n_scale, int size, double x, double y) {
  return one_matrix_kernel(orthogonal_family(v, n_scale, size), x, y);
}

}  // namespace tmm
