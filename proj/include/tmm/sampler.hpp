#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tmm/grid_measure.hpp"
#include "tmm/polynomial.hpp"

namespace tmm {

struct SampleMeta {
  double alpha = 0.0;
  double tau = 0.0;
  int burnin = 0;
  int steps = 0;
};

struct EigenSample {
  int n = 0;
  std::vector<double> values;  // ascending
  std::uint64_t seed = 0;
  SampleMeta meta;
};

// Independent sub-seed for stream `k` of `seed` (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k);

// Eigenvalues of a GUE matrix with density ~ exp(-(n/2) Tr M^2).
EigenSample sample_gue(int n, std::uint64_t seed);

struct ChainParams {
  int burnin = 200;  // sweeps of n single-site updates, step adapted
  int thin = 10;     // retain every thin*n updates after burn-in
  int chains = 4;    // independent chains for pooled runs
  int jobs = 0;      // worker threads, 0 = OpenMP default
};

struct MetropolisRun {
  std::vector<std::vector<double>> states;  // each sorted
  double acceptance = 0.0;                  // after burn-in
  double step = 0.0;                        // frozen proposal width
};

// Single-site Metropolis for the log-density
//   2 sum_{i<j} log|y_i - y_j| - n sum W(y_j),
// keeping `steps` thinned states.
MetropolisRun metropolis_chain(const Polynomial& w_eff, int n, int steps, std::uint64_t seed,
                               const ChainParams& chain = {});

// Last retained state of a chain with `steps` retained states.
EigenSample metropolis_one_matrix(const Polynomial& w_eff, int n, int steps, int burnin, std::uint64_t seed);

// W_eff = y^4/4 + ((alpha - tau^2)/2) y^2. Throws InvalidEffectivePotential
// if its leading coefficient is not positive.
Polynomial m1_effective_potential(double alpha, double tau);

// One draw of the eigenvalues of G + tau diag(y): G fresh GUE, y a retained
// chain state for W_eff.
EigenSample sample_m1(double alpha, double tau, int n, std::uint64_t seed, const ChainParams& chain = {});

// `count` draws split over chain.chains independent chains, run in parallel.
// The result depends on (seed, count, chain.chains) only, not on jobs.
std::vector<EigenSample> sample_m1_batch(double alpha, double tau, int n, int count, std::uint64_t seed,
                                         const ChainParams& chain = {});

// Serial reference for sample_m1_batch.
std::vector<EigenSample> sample_m1_batch_serial(double alpha, double tau, int n, int count, std::uint64_t seed,
                                                const ChainParams& chain = {});

// Integral of |F_emp - F_mu| with F_mu the CDF of the piecewise-constant
// measure normalized to mass one.
double wasserstein1(const std::vector<double>& values, const GridMeasure& mu);
double wasserstein1(const EigenSample& sample, const GridMeasure& mu);

// sup |F_emp - F| for a continuous reference CDF.
double kolmogorov_distance(std::vector<double> values, const std::function<double(double)>& cdf);

// All values of a batch, sorted.
std::vector<double> pooled(const std::vector<EigenSample>& samples);

}  // namespace tmm
