#include <algorithm>
#include <cmath>
#include <numbers>

#include "tmm/errors.hpp"
#include "tmm/rh.hpp"

namespace tmm {

namespace {

constexpr double pi = std::numbers::pi;

std::vector<long long> flat(std::initializer_list<std::initializer_list<long long>> rows) {
  std::vector<long long> out;
  for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<long long> product(const std::vector<long long>& a, const std::vector<long long>& b, int n) {
  std::vector<long long> c(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) c[i * n + j] += a[i * n + k] * b[k * n + j];
  return c;
}

}  // namespace

long long integer_det(const std::vector<long long>& m, int n) {
  if (n == 1) return m[0];
  long long d = 0;
  for (int c = 0; c < n; ++c) {
    if (m[c] == 0) continue;
    std::vector<long long> minor;
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (j != c) minor.push_back(m[i * n + j]);
    d += (c % 2 ? -1 : 1) * m[c] * integer_det(minor, n - 1);
  }
  return d;
}

void JumpSystem::validate() const {
  if (size != 2 && size != 4) throw ValidationError("jump system size must be 2 or 4");
  if (rays.empty()) throw ValidationError("jump system has no rays");
  for (std::size_t i = 0; i < rays.size(); ++i) {
    const auto& r = rays[i];
    if (r.jump.size() != static_cast<std::size_t>(size) * size)
      throw ValidationError("jump matrix " + std::to_string(i) + " has the wrong shape");
    if (integer_det(r.jump, size) != 1)
      throw ValidationError("jump matrix " + std::to_string(i) + " does not have determinant 1");
    if (!(r.angle >= 0.0 && r.angle < 2.0 * pi)) throw ValidationError("ray angles must lie in [0, 2pi)");
    if (i > 0 && !(r.angle > rays[i - 1].angle)) throw ValidationError("rays must be sorted counterclockwise and distinct");
  }
  if (angles_params) {
    const auto [p1, p2] = *angles_params;
    if (!(0.0 < p1 && p1 < p2 && p2 < pi / 2)) throw ValidationError("need 0 < phi1 < phi2 < pi/2");
  }
}

JumpSystem pii_jumps() {
  JumpSystem js;
  js.size = 2;
  js.rays = {{pi / 6, flat({{1, 0}, {1, 1}})},
             {5 * pi / 6, flat({{1, 0}, {-1, 1}})},
             {7 * pi / 6, flat({{1, 1}, {0, 1}})},
             {11 * pi / 6, flat({{1, -1}, {0, 1}})}};
  js.validate();
  return js;
}

JumpSystem critical_jumps(double phi1, double phi2) {
  JumpSystem js;
  js.size = 4;
  js.angles_params = std::array<double, 2>{phi1, phi2};
  if (!(0.0 < phi1 && phi1 < phi2 && phi2 < pi / 2)) throw ValidationError("need 0 < phi1 < phi2 < pi/2");
  const double ang[10] = {0.0,      phi1,          phi2,          pi - phi2,     pi - phi1,
                          pi,       pi + phi1,     pi + phi2,     2 * pi - phi2, 2 * pi - phi1};
  const std::vector<long long> m[10] = {
      flat({{0, 0, 1, 0}, {0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}}),
      flat({{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 0, 1, 0}, {0, 0, 0, 1}}),
      flat({{1, 0, 0, 0}, {-1, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 0, 1}}),
      flat({{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, -1, 1}}),
      flat({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, -1, 0, 1}}),
      flat({{1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}, {0, 1, 0, 0}}),
      flat({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, -1, 0, 1}}),
      flat({{1, -1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 1, 1}}),
      flat({{1, 0, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, -1}, {0, 0, 0, 1}}),
      flat({{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 0, 1, 0}, {0, 0, 0, 1}})};
  for (int k = 0; k < 10; ++k) js.rays.push_back({ang[k], m[k]});
  js.validate();
  return js;
}

long long jump_cycle_check(const JumpSystem& js) {
  const int n = js.size;
  std::vector<long long> p(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) p[i * n + i] = 1;
  for (const auto& r : js.rays) p = product(p, r.jump, n);
  long long worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::llabs(p[i * n + j] - (i == j ? 1 : 0)));
  return worst;
}

std::array<double, 2> double_scaling_map(double a, double b) { return {0.25 * (a * a - 5.0 * b), -a}; }

std::array<double, 2> critical_parameters(double a, double b, double n) {
  const double e1 = a * std::pow(n, -1.0 / 3.0), e2 = b * std::pow(n, -2.0 / 3.0);
  return {-1.0 + 2.0 * e1 - e2, 1.0 + e1 + 2.0 * e2};
}

std::array<cplx, 4> CriticalKernelData::exponents(cplx zeta) const {
  const cplx m = std::sqrt(-zeta), p = std::sqrt(zeta);
  const cplx a = 2.0 / 3.0 * m * m * m + 2.0 * s * m;
  const cplx b = 2.0 / 3.0 * p * p * p + 2.0 * s * p;
  return {-a + t * zeta, -b - t * zeta, a + t * zeta, b - t * zeta};
}

CriticalKernelData critical_kernel_data(double a, double b, double phi1, double phi2) {
  CriticalKernelData d;
  d.jumps = critical_jumps(phi1, phi2);
  const auto st = double_scaling_map(a, b);
  d.s = st[0];
  d.t = st[1];
  d.exponent_text = {"-(2/3)(-zeta)^{3/2} - 2s(-zeta)^{1/2} + t zeta",
                     "-(2/3)zeta^{3/2} - 2s zeta^{1/2} - t zeta",
                     "+(2/3)(-zeta)^{3/2} + 2s(-zeta)^{1/2} + t zeta",
                     "+(2/3)zeta^{3/2} + 2s zeta^{1/2} - t zeta"};
  return d;
}

nlohmann::json to_json(const JumpSystem& js) {
  nlohmann::json rays = nlohmann::json::array();
  for (const auto& r : js.rays) {
    nlohmann::json m = nlohmann::json::array();
    for (int i = 0; i < js.size; ++i)
      m.push_back(std::vector<long long>(r.jump.begin() + i * js.size, r.jump.begin() + (i + 1) * js.size));
    rays.push_back({{"angle", r.angle}, {"jump", m}});
  }
  nlohmann::json out = {{"size", js.size}, {"rays", rays}};
  if (js.angles_params) out["angles_params"] = {(*js.angles_params)[0], (*js.angles_params)[1]};
  return out;
}

}  // namespace tmm
