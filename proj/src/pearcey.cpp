#include <cmath>
#include <numbers>
#include <vector>

#include "tmm/errors.hpp"
#include "tmm/quadrature.hpp"
#include "tmm/rh.hpp"

namespace tmm {

namespace {

constexpr double pi = std::numbers::pi;

struct Node {
  cplx point;
  cplx weight;  // includes dw or dz and the exponential factor
};

// Length along `dir` from `base` beyond which Re(expo) stays below the
// peak minus log(1e18).
template <class F>
double cutoff(F expo, cplx base, cplx dir) {
  double top = -1e300, last_big = 0.0;
  for (int i = 0; i <= 4000; ++i) top = std::max(top, expo(base + dir * (i * 0.005)).real());
  for (int i = 0; i <= 4000; ++i) {
    const double r = i * 0.005;
    if (expo(base + dir * r).real() > top - 41.5) last_big = r;
  }
  if (last_big >= 19.9) throw QuadratureNotConverged("pearcey: integrand does not decay on the contour");
  return last_big + 0.25;
}

// Gauss-Legendre on [0, L] in panels of at most 16 points, `nodes` total.
QuadratureRule half_line(double length, int nodes) {
  const int panels = std::max(1, nodes / 16), per = nodes / panels;
  std::vector<double> edges(panels + 1);
  for (int i = 0; i <= panels; ++i) edges[i] = length * i / panels;
  return composite_gauss_legendre(edges, per);
}

cplx evaluate(double x, double y, double s, int nodes, double shift, double radius_scale) {
  auto ew = [&](cplx w) { return w * w * w * w / 4.0 - s * w * w / 2.0 + x * w; };
  auto ez = [&](cplx z) { return -z * z * z * z / 4.0 + s * z * z / 2.0 - y * z; };
  const cplx i1(0.0, 1.0);
  // w: four rays; `sign` is +1 when integrated away from the vertex
  struct Ray {
    cplx vertex, dir;
    double sign;
  };
  const Ray rays[4] = {{shift, std::polar(1.0, pi / 4), -1.0},
                       {shift, std::polar(1.0, -pi / 4), 1.0},
                       {-shift, std::polar(1.0, 5 * pi / 4), -1.0},
                       {-shift, std::polar(1.0, 3 * pi / 4), 1.0}};
  std::vector<Node> wn, zn;
  for (const auto& r : rays) {
    const double len = radius_scale * cutoff(ew, r.vertex, r.dir);
    const auto q = half_line(len, nodes);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const cplx w = r.vertex + r.dir * q.nodes[i];
      wn.push_back({w, r.sign * r.dir * q.weights[i] * std::exp(ew(w))});
    }
  }
  for (double side : {1.0, -1.0}) {
    const cplx dir = side * i1;
    const double len = radius_scale * cutoff(ez, 0.0, dir);
    const auto q = half_line(len, nodes);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const cplx z = dir * q.nodes[i];
      zn.push_back({z, i1 * q.weights[i] * std::exp(ez(z))});
    }
  }
  double re = 0.0, im = 0.0;
  const long count = static_cast<long>(wn.size());
#pragma omp parallel for reduction(+ : re, im)
  for (long a = 0; a < count; ++a) {
    cplx inner = 0.0;
    for (const auto& z : zn) inner += z.weight / (z.point - wn[a].point);
    const cplx t = wn[a].weight * inner;
    re += t.real();
    im += t.imag();
  }
  return cplx(re, im) / ((2.0 * pi * i1) * (2.0 * pi * i1));
}

}  // namespace

PearceyValue pearcey_eval(double x, double y, double s, const PearceyOptions& opt) {
  if (opt.nodes < 64) throw ValidationError("pearcey: nodes must be >= 64");
  if (!(opt.vertex_shift > 0.0) || !(opt.radius_scale >= 1.0)) throw ValidationError("pearcey: bad contour options");
  const cplx a = evaluate(x, y, s, opt.nodes, opt.vertex_shift, opt.radius_scale);
  const cplx b = evaluate(x, y, s, 2 * opt.nodes, opt.vertex_shift, opt.radius_scale);
  PearceyValue v;
  v.value = b.real();
  v.imag = std::abs(b.imag());
  v.doubling_gap = std::abs(a - b);
  return v;
}

double pearcey_kernel(double x, double y, double s, int nodes) {
  PearceyOptions opt;
  opt.nodes = nodes;
  const auto v = pearcey_eval(x, y, s, opt);
  if (v.doubling_gap > 1e-8)
    throw QuadratureNotConverged("pearcey: node doubling changed the value by " + std::to_string(v.doubling_gap));
  if (v.imag > 1e-8) throw QuadratureNotConverged("pearcey: imaginary part " + std::to_string(v.imag));
  return v.value;
}

}  // namespace tmm
