#include <cmath>
#include <numbers>

#include "tmm/airy.hpp"
#include "tmm/rh.hpp"

namespace tmm {

double sine_kernel(double x, double y) {
  const double d = std::numbers::pi * (x - y);
  if (std::abs(d) < 1e-8) return 1.0 - d * d / 6.0;
  return std::sin(d) / d;
}

double airy_kernel(double x, double y) {
  const auto a = airy(x);
  if (x == y) return a.aip * a.aip - x * a.ai * a.ai;
  const auto b = airy(y);
  // written symmetrically so K(x, y) and K(y, x) round identically
  const double num = x < y ? a.ai * b.aip - a.aip * b.ai : b.ai * a.aip - b.aip * a.ai;
  const double den = x < y ? x - y : y - x;
  return num / den;
}

}  // namespace tmm
