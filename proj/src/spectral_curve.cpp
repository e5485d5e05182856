#include <algorithm>
#include <array>
#include <cmath>

#include "tmm/errors.hpp"
#include "tmm/phase.hpp"

namespace tmm {

BivariateCurve::BivariateCurve(std::vector<std::vector<double>> c) : c_(std::move(c)) { trim(); }

void BivariateCurve::trim() {
  for (auto& row : c_)
    while (!row.empty() && row.back() == 0.0) row.pop_back();
  while (!c_.empty() && c_.back().empty()) c_.pop_back();
}

double BivariateCurve::coeff(int i, int j) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0.0;
  const auto& row = c_[i];
  return (j >= 0 && j < static_cast<int>(row.size())) ? row[j] : 0.0;
}

int BivariateCurve::degree_xi() const {
  int d = -1;
  for (const auto& row : c_) d = std::max(d, static_cast<int>(row.size()) - 1);
  return d;
}

std::complex<double> BivariateCurve::operator()(std::complex<double> x, std::complex<double> xi) const {
  std::complex<double> s = 0.0, xp = 1.0;
  for (const auto& row : c_) {
    std::complex<double> r = 0.0;
    for (auto it = row.rbegin(); it != row.rend(); ++it) r = r * xi + *it;
    s += xp * r;
    xp *= x;
  }
  return s;
}

double BivariateCurve::magnitude(std::complex<double> x, std::complex<double> xi) const {
  double s = 0.0;
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < c_[i].size(); ++j)
      s += std::abs(c_[i][j]) * std::pow(std::abs(x), i) * std::pow(std::abs(xi), j);
  return s;
}

Polynomial BivariateCurve::at_x(double x) const {
  std::vector<double> p(std::max(0, degree_xi() + 1), 0.0);
  double xp = 1.0;
  for (const auto& row : c_) {
    for (std::size_t j = 0; j < row.size(); ++j) p[j] += xp * row[j];
    xp *= x;
  }
  return Polynomial(p);
}

double BivariateCurve::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& row : c_)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

BivariateCurve BivariateCurve::normalized() const {
  if (c_.empty()) return *this;
  const double lead = c_[0].empty() ? 0.0 : c_[0].back();
  const double s = lead != 0.0 ? lead : max_abs_coeff();
  auto c = c_;
  for (auto& row : c)
    for (auto& v : row) v /= s;
  return BivariateCurve(c);
}

double BivariateCurve::max_coeff_gap(const BivariateCurve& o) const {
  double m = 0.0;
  const int nx = std::max(degree_x(), o.degree_x()), ny = std::max(degree_xi(), o.degree_xi());
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j) m = std::max(m, std::abs(coeff(i, j) - o.coeff(i, j)));
  return m;
}

BivariateCurve operator*(const BivariateCurve& a, const BivariateCurve& b) {
  if (a.degree_x() < 0 || b.degree_x() < 0) return {};
  std::vector<std::vector<double>> c(a.degree_x() + b.degree_x() + 1,
                                     std::vector<double>(a.degree_xi() + b.degree_xi() + 1, 0.0));
  for (int i = 0; i <= a.degree_x(); ++i)
    for (int j = 0; j <= a.degree_xi(); ++j)
      for (int k = 0; k <= b.degree_x(); ++k)
        for (int l = 0; l <= b.degree_xi(); ++l) c[i + k][j + l] += a.coeff(i, j) * b.coeff(k, l);
  return BivariateCurve(c);
}

BivariateCurve operator-(const BivariateCurve& a, const BivariateCurve& b) {
  const int nx = std::max(a.degree_x(), b.degree_x()), ny = std::max(a.degree_xi(), b.degree_xi());
  if (nx < 0) return {};
  std::vector<std::vector<double>> c(nx + 1, std::vector<double>(ny + 1, 0.0));
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j) c[i][j] = a.coeff(i, j) - b.coeff(i, j);
  return BivariateCurve(c);
}

namespace {

BivariateCurve in_xi(const Polynomial& p) { return BivariateCurve({p.coeffs()}); }

Polynomial contract(const Polynomial& v, const std::vector<double>& mom) {
  const Polynomial dv = v.derivative();
  const int d = dv.degree();
  if (d < 1) return {};
  if (static_cast<int>(mom.size()) < d) throw ValidationError("not enough moments for the contraction");
  std::vector<double> q(d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j <= d; ++j) q[i] += dv.coeff(j) * mom[j - 1 - i];
  return Polynomial(q);
}

}  // namespace

BivariateCurve spectral_curve_from_moments(const Polynomial& w, double tau, const std::vector<double>& moments) {
  const Polynomial we = w_effective(w, tau);
  const Polynomial q = contract(we, moments);
  // tau x - tau^2 xi
  const BivariateCurve left({{0.0, -tau * tau}, {tau}});
  // W_eff'(xi) + tau^2 xi - tau x
  Polynomial inner = we.derivative() + Polynomial::monomial(1, tau * tau);
  auto rows = std::vector<std::vector<double>>{inner.coeffs(), {-tau}};
  const BivariateCurve right(rows);
  return left * right - in_xi(q);
}

BivariateCurve spectral_curve_quadratic_v(const Polynomial& w, double tau, const GridMeasure& mu) {
  const int d = std::max(1, w.degree() - 1);
  std::vector<double> mom(d);
  for (int k = 0; k < d; ++k) mom[k] = mu.moment(k);
  return spectral_curve_from_moments(w, tau, mom);
}

namespace {

std::vector<double> richardson(const Polynomial& v, const GridMeasure& grid, int count,
                               std::vector<std::array<double, 2>>& support) {
  const auto coarse = solve_one_matrix(v, grid);
  support = coarse.support_intervals;
  const auto fine = solve_one_matrix(v, GridMeasure::make(grid.left, grid.right, 2 * grid.cells, grid.mass, grid.axis));
  std::vector<double> m(count);
  for (int k = 0; k < count; ++k) m[k] = (4.0 * fine.measure.moment(k) - coarse.measure.moment(k)) / 3.0;
  return m;
}

// Sign change of R = V'^2/4 - Q nearest `guess`, Q built from the moments.
double curve_edge(const Polynomial& v, const std::vector<double>& mom, double guess, double h, double side) {
  const Polynomial dv = v.derivative();
  std::vector<double> q(std::max(dv.degree(), 1), 0.0);
  for (int i = 0; i < dv.degree(); ++i)
    for (int j = i + 1; j <= dv.degree(); ++j) q[i] += dv.coeff(j) * mom[j - 1 - i];
  const Polynomial r = dv * dv * 0.25 - Polynomial(q);
  // walk outward from inside the support until R turns non-negative
  double a = guess - side * 4.0 * h;
  if (r(a) >= 0.0) return guess;
  double b = a;
  while (r(b) < 0.0) {
    b += side * 0.25 * h;
    if (std::abs(b - guess) > 8.0 * h) return guess;
  }
  for (int it = 0; it < 80; ++it) {
    const double m = 0.5 * (a + b);
    (r(m) < 0.0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> extrapolated_moments(const Polynomial& v, const GridMeasure& grid, int count) {
  const int need = std::max(count, v.derivative().degree());
  std::vector<std::array<double, 2>> iv;
  auto m = richardson(v, grid, need, iv);
  // A support edge strictly inside a cell spoils the h^2 error expansion, so
  // re-solve on grids whose cell edges hit the outer support edges.
  const double h = grid.width();
  GridMeasure cur = grid;
  for (int pass = 0; pass < 2; ++pass) {
    if (iv.empty()) break;
    const double lo = curve_edge(v, m, iv.front()[0], cur.width(), -1.0);
    const double hi = curve_edge(v, m, iv.back()[1], cur.width(), +1.0);
    const int inner = std::max(4, static_cast<int>(std::lround((hi - lo) / h)));
    const double step = (hi - lo) / inner;
    const int pad_lo = static_cast<int>(std::ceil((lo - grid.left) / step));
    const int pad_hi = static_cast<int>(std::ceil((grid.right - hi) / step));
    cur = GridMeasure::make(lo - pad_lo * step, hi + pad_hi * step, inner + pad_lo + pad_hi, grid.mass, grid.axis);
    m = richardson(v, cur, need, iv);
  }
  m.resize(count);
  return m;
}

std::vector<double> xi_derivatives(const BivariateCurve& curve, double x0, double xi0, int count) {
  Polynomial p = curve.at_x(x0);
  std::vector<double> out;
  for (int j = 0; j < count; ++j) {
    out.push_back(p(xi0));
    p = p.derivative();
  }
  return out;
}

int root_multiplicity(const BivariateCurve& curve, double x0, double xi0, double tol) {
  const double scale = curve.max_abs_coeff();
  const int deg = curve.at_x(x0).degree();
  if (deg < 0) throw ValidationError("root_multiplicity: curve vanishes identically at x0");
  const auto d = xi_derivatives(curve, x0, xi0, deg + 1);
  int m = 0;
  while (m <= deg && std::abs(d[m]) <= tol * scale) ++m;
  return m;
}

std::complex<double> xi_from_mu1(std::complex<double> z, const Polynomial& v, const GridMeasure& mu1) {
  static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
  static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
  const double h = mu1.width();
  double dist = 1e300;
  for (int i = 0; i < mu1.cells; ++i) {
    if (mu1.density[i] <= 0.0) continue;
    const double a = mu1.edge(i), b = a + h;
    const double dx = z.real() < a ? a - z.real() : (z.real() > b ? z.real() - b : 0.0);
    dist = std::min(dist, std::hypot(dx, z.imag()));
  }
  if (dist < 2.0 * h) throw TooCloseToSupport("xi_from_mu1: z is within two cells of the support");
  std::complex<double> s = 0.0;
  for (int i = 0; i < mu1.cells; ++i) {
    if (mu1.density[i] == 0.0) continue;
    std::complex<double> c = 0.0;
    for (int k = 0; k < 4; ++k) c += gw[k] / (z - (mu1.center(i) + 0.5 * h * gx[k]));
    s += 0.5 * c * mu1.density[i] * h;
  }
  return v.derivative()(z) - s;
}

namespace {

std::vector<double> free_density(const VectorEquilibriumSolution& sol) {
  std::vector<double> f(sol.mu2.cells, 0.0);
  for (int i = 0; i < sol.mu2.cells; ++i)
    f[i] = std::max(0.0, sol.sigma2_mass[i] / sol.mu2.width() - sol.mu2.density[i]);
  return f;
}

std::vector<Cut> cuts_of(const GridMeasure& g, const std::vector<double>& density, Axis axis, double threshold) {
  GridMeasure tmp = g;
  tmp.density = density;
  std::vector<Cut> out;
  for (const auto& in : support_intervals(tmp, threshold)) out.push_back({axis, in[0], in[1]});
  return out;
}

}  // namespace

SheetStructure sheet_structure(const VectorEquilibriumSolution& sol, double threshold) {
  const auto s1 = cuts_of(sol.mu1, sol.mu1.density, Axis::Real, threshold);
  const auto s2 = cuts_of(sol.mu2, free_density(sol), Axis::Imaginary, threshold);
  const auto s3 = cuts_of(sol.mu3, sol.mu3.density, Axis::Real, threshold);
  SheetStructure out;
  out.sheets[0] = s1;
  out.sheets[1] = s1;
  out.sheets[1].insert(out.sheets[1].end(), s2.begin(), s2.end());
  out.sheets[2] = s2;
  out.sheets[2].insert(out.sheets[2].end(), s3.begin(), s3.end());
  out.sheets[3] = s3;
  return out;
}

CurveExample curve_example(const std::string& name, double tau) {
  CurveExample e;
  e.name = name;
  e.tau = tau;
  if (name == "1") {
    e.w = Polynomial({0.0, 0.0, -(2.0 - tau * tau) / 2.0, 0.0, 0.25});
    e.grid = GridMeasure::make(-4.0, 4.0, 400);
  } else if (name == "2" || name == "2c") {
    // The reference curve carries 2^{1/3} xi where W as given yields 2^{-1/3} xi.
    const double lin = name == "2" ? -std::cbrt(0.5) : -std::cbrt(2.0);
    e.w = Polynomial({0.0, 0.0, 0.5 * (lin + tau * tau), 0.0, -std::pow(2.0, -4.0 / 3.0), 0.0, 1.0 / 6.0});
    e.grid = GridMeasure::make(-2.5, 2.5, 1000);
  } else if (name == "3") {
    e.w = Polynomial({0.0, 8.0 / 5.0, 0.2 + 0.5 * tau * tau, -4.0 / 15.0, 0.05});
    e.x0 = 4.0 * std::sqrt(5.0) / 5.0;
    e.xi0 = 2.0;
    e.grid = GridMeasure::make(-4.0, 4.0, 400);
  } else {
    throw ValidationError("unknown example '" + name + "' (expected 1, 2, 2c or 3)");
  }
  return e;
}

CurveExample curve_example(const std::string& name) {
  if (name == "1") return curve_example(name, 1.0);
  if (name == "2" || name == "2c") return curve_example(name, std::cbrt(0.5));
  if (name == "3") return curve_example(name, std::sqrt(5.0) / 5.0);
  return curve_example(name, 1.0);
}

BivariateCurve example3_reference_curve() {
  const double r5 = std::sqrt(5.0);
  return BivariateCurve({{-32.0, 16.0, -8.0, 4.0, -1.0}, {8.0 * r5, 4.0 * r5, -4.0 * r5, r5}, {-5.0}});
}

BivariateCurve multicritical_reference_curve() { return BivariateCurve({{0.0, 0.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 0.0, -1.0}, {1.0}}); }

nlohmann::json to_json(const BivariateCurve& c) {
  return {{"coeffs", c.normalized().coeffs()}, {"normalization", "monic-in-xi-leading"}};
}

nlohmann::json to_json(const SheetStructure& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& sheet : s.sheets) {
    nlohmann::json cuts = nlohmann::json::array();
    for (const auto& c : sheet) cuts.push_back({{"axis", to_string(c.axis)}, {"lo", c.lo}, {"hi", c.hi}});
    out.push_back(cuts);
  }
  return {{"sheets", out}};
}

}  // namespace tmm
