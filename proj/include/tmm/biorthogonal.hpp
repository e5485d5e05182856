#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <complex>
#include <string>
#include <vector>

#include "json.hpp"

#include "tmm/critical.hpp"
#include "tmm/polynomial.hpp"

namespace tmm {

using Real = boost::multiprecision::mpfr_float;

// Sets the mpfr working precision for the current scope and serializes
// callers: Boost keeps the default precision in a process-wide static.
class PrecisionScope {
 public:
  explicit PrecisionScope(int bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

// B_jk = iint x^j y^k exp(-n (V(x) + W(y) - tau x y)) dx dy, j, k < size.
struct BimomentMatrix {
  int size = 0;
  int n_scale = 1;
  int precision_bits = 256;
  double half_width = 0.0;  // truncation L of the square [-L, L]^2
  int nodes = 0;            // quadrature nodes per axis
  PotentialPair pp;
  std::vector<Real> entries;  // row-major

  const Real& at(int j, int k) const { return entries[static_cast<std::size_t>(j) * size + k]; }
  Real& at(int j, int k) { return entries[static_cast<std::size_t>(j) * size + k]; }
  double value(int j, int k) const { return at(j, k).convert_to<double>(); }
};

// Quadrature layout for the weight. Exposed for node-doubling checks.
struct BimomentRule {
  int points = 48;       // Gauss-Legendre points per panel
  double density = 1.0;  // multiplies the default panel count on each axis
};

// tau may be 0 (factorized weight). Precision is raised to 256 bits when
// size > 16. Throws SizeTooLarge for size > 48, NonConfiningWeight if the
// weight is not integrable.
BimomentMatrix bimoments(const PotentialPair& pp, int n_scale, int size, int precision_bits = 256);
BimomentMatrix bimoments(const PotentialPair& pp, int n_scale, int size, int precision_bits, const BimomentRule& rule);

struct BiorthogonalFamily {
  int size = 0;
  int n_scale = 1;
  int precision_bits = 256;
  PotentialPair pp;
  std::vector<std::vector<Real>> p_mp, q_mp;  // ascending coefficients
  std::vector<Real> h_sq_mp;
  std::vector<Polynomial> p, q;  // rounded copies
  std::vector<double> h_sq;
  // max |iint p_j q_k w - h_k^2 delta_jk| / sqrt(h_j^2 h_k^2) under an
  // independent quadrature rule
  double residual = 0.0;
};

// LDU of B: rows of L^-1 give p, columns of U^-1 give q, the pivots h^2.
// Throws SingularMinor when a pivot vanishes at working precision.
BiorthogonalFamily biorthogonal_family(const BimomentMatrix& b, bool verify = true);

struct ZeroReport {
  bool real = true;
  bool simple = true;
  bool interlacing = true;
  double max_imag = 0.0;  // relative to the largest zero modulus
  double min_gap = 0.0;   // smallest distance between zeros of one p_k
};

// Companion-matrix zeros of p in double precision.
std::vector<std::complex<double>> polynomial_zeros(const Polynomial& p);
ZeroReport check_zeros(const std::vector<Polynomial>& family, double tol = 1e-9);

// w_j(x) = int y^j exp(-n (W(y) + V(x) - tau x y)) dy.
double w_function(double x, int j, const PotentialPair& pp, int n_scale);

enum class KernelKind { K11, K12, K21, K22 };
KernelKind kernel_kind(const std::string& label);

class KernelSet {
 public:
  explicit KernelSet(BiorthogonalFamily family);

  const BiorthogonalFamily& family() const { return f_; }
  // P_j(y) = int p_j(x) w(x, y) dx and Q_k(x) = int q_k(y) w(x, y) dy.
  std::vector<double> big_p(double y) const;
  std::vector<double> big_q(double x) const;
  double weight(double x, double y) const;
  double operator()(KernelKind which, double u, double v) const;

  // Block sizes of the d_W x d_W RH problem: n_j = floor((n + d_W - j - 2) / (d_W - 1)).
  int d_w() const { return f_.pp.w.degree(); }
  std::vector<int> block_sizes() const;

 private:
  BiorthogonalFamily f_;
};

double kernels(const KernelSet& ks, KernelKind which, double u, double v);
// det(K11(x_i, x_j)).
double correlation_det(const KernelSet& ks, const std::vector<double>& points);

// One-matrix orthogonal polynomials for exp(-n V(x)) dx from Lanczos on a
// discretized weight, with full reorthogonalization.
struct OrthogonalFamily {
  Polynomial v;
  int n_scale = 1;
  std::vector<double> a, b;  // x pi_k = pi_{k+1} + a_k pi_k + b_k pi_{k-1}
  double mass = 0.0;         // int exp(-n V)
  std::vector<Polynomial> monic() const;
  std::vector<double> h_sq() const;
  // orthonormal values phi_0..phi_{size-1} at x
  std::vector<double> orthonormal(double x) const;
};

OrthogonalFamily orthogonal_family(const Polynomial& v, int n_scale, int size);
// exp(-n (V(x) + V(y)) / 2) sum_k p_k(x) p_k(y) / h_k^2.
double one_matrix_kernel(const OrthogonalFamily& f, double x, double y);
double one_matrix_kernel(const Polynomial& v, int n_scale, int size, double x, double y);

// Largest |coefficient difference| between two families, each coefficient
// scaled by the largest coefficient of its polynomial.
double coefficient_gap(const std::vector<Polynomial>& a, const std::vector<Polynomial>& b);

nlohmann::json to_json(const BiorthogonalFamily& f);

}  // namespace tmm
