#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace tmm {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;  // row-major 2x2

// ---- limiting kernels ----

double sine_kernel(double x, double y);
// Diagonal by Ai'(x)^2 - x Ai(x)^2.
double airy_kernel(double x, double y);

// Double integral over z in iR and w on the four rays of the X-shaped
// contour, exponent w^4/4 - s w^2/2 + x w - z^4/4 + s z^2/2 - y z.
// `nodes` Gauss-Legendre nodes per ray; result checked against 2*nodes.
struct PearceyOptions {
  int nodes = 64;
  double vertex_shift = 1.0;   // ray vertices moved to +-shift, away from iR
  double radius_scale = 1.0;   // multiplies the truncation radii
};
struct PearceyValue {
  double value = 0.0;
  double imag = 0.0;         // imaginary part before it was discarded
  double doubling_gap = 0.0;  // |K(nodes) - K(2 nodes)|
};
PearceyValue pearcey_eval(double x, double y, double s, const PearceyOptions& opt = {});
double pearcey_kernel(double x, double y, double s, int nodes = 64);

// ---- Hastings-McLeod ----

struct HMSolution {
  std::vector<double> nu_grid;  // descending
  std::vector<double> q, q_prime;
  double step = 0.0;
  double residual = 0.0;  // max collocation residual on interior nodes
  int newton_steps = 0;

  double nu_max() const { return nu_grid.front(); }
  double nu_min() const { return nu_grid.back(); }
  // Cubic Hermite interpolation between nodes.
  double q_at(double nu) const;
  double q_prime_at(double nu) const;
};

// Damped Newton on the fourth-order (Numerov) collocation of
// q'' = 2 q^3 + nu q with q(nu_max) = Ai(nu_max) and the large-negative-nu
// series at nu_min. Throws NotConverged.
HMSolution hastings_mcleod(double nu_min = -10.0, double nu_max = 8.0, double step = 0.01);

// Discrete residual max |q'' - 2 q^3 - nu q| with q'' from the Numerov
// relation; same measure the solver drives to zero.
double hm_collocation_residual(const HMSolution& hm);

// ---- Psi of the Painleve II RH problem ----

// Sectors between the rays at pi/6, 5pi/6, 7pi/6, 11pi/6: I contains the
// positive axis, II the positive imaginary axis, and so on.
enum class PsiSector { I = 0, II = 1, III = 2, IV = 3 };

struct PsiOptions {
  double radius = 0.0;     // start radius; 0 picks the smallest adequate one
  double start_angle = -1;  // anti-Stokes start direction; <0 picks the default
  double rtol = 1e-13;
};

struct PsiValue {
  cplx zeta;
  double nu = 0.0;
  Mat2 matrix{};
  PsiSector sector = PsiSector::I;
  double radius = 0.0;         // where the asymptotic data was imposed
  double series_error = 0.0;   // size of the last retained series term there
  cplx det() const { return matrix[0] * matrix[3] - matrix[1] * matrix[2]; }
};

// Coefficients m_k of Psi e^{i theta sigma3} ~ sum m_k zeta^{-k}, theta =
// (4/3) zeta^3 + nu zeta, for the Lax matrix with off-diagonal data (q, q').
std::vector<Mat2> psi_series(double q, double qp, double nu, int terms = 30);

PsiSector psi_sector(cplx zeta);
// Throws SectorBoundaryTooClose within 0.05 rad of a ray, RadiusInsufficient
// if the series cannot reach 1e-10 at any admissible radius.
PsiValue psi_solve(cplx zeta, double nu, const HMSolution& hm, const PsiOptions& opt = {});
// The analytic continuation of the given sector's solution to zeta (no
// boundary-distance check); used for jump checks on the rays.
PsiValue psi_in_sector(cplx zeta, double nu, const HMSolution& hm, PsiSector sector, const PsiOptions& opt = {});

// zeta Psi_12(zeta) e^{-i theta} on the positive axis.
cplx psi_q_probe(double zeta, double nu, const HMSolution& hm);

struct KpiiValue {
  double value = 0.0;
  double imag = 0.0;
};
KpiiValue kpii_eval(double x, double y, double nu, const HMSolution& hm, bool use_adjugate = false);
double kpii_kernel(double x, double y, double nu, const HMSolution& hm);

// ---- jump data ----

struct JumpRay {
  double angle = 0.0;
  std::vector<long long> jump;  // row-major, size x size
};

struct JumpSystem {
  int size = 2;
  std::vector<JumpRay> rays;
  std::optional<std::array<double, 2>> angles_params;
  void validate() const;
};

// Rays at pi/6, 5pi/6, 7pi/6, 11pi/6 with J1..J4.
JumpSystem pii_jumps();
// Ten rays of the 4x4 problem for 0 < phi1 < phi2 < pi/2.
JumpSystem critical_jumps(double phi1 = 0.4, double phi2 = 1.0);
// Max-norm distance of the counterclockwise product from I, exact.
long long jump_cycle_check(const JumpSystem& js);
long long integer_det(const std::vector<long long>& m, int size);

std::array<double, 2> double_scaling_map(double a, double b);
// (alpha, tau) = (-1, 1) + a n^{-1/3} (2, 1) + b n^{-2/3} (-1, 2)
std::array<double, 2> critical_parameters(double a, double b, double n);

// The four diagonal exponents of the large-zeta behaviour of the 4x4
// problem, principal branches.
struct CriticalKernelData {
  JumpSystem jumps;
  double s = 0.0, t = 0.0;
  std::array<std::string, 4> exponent_text;
  std::array<cplx, 4> exponents(cplx zeta) const;
};
CriticalKernelData critical_kernel_data(double a, double b, double phi1 = 0.4, double phi2 = 1.0);

nlohmann::json to_json(const JumpSystem& js);
nlohmann::json to_json(const HMSolution& hm);

}  // namespace tmm
