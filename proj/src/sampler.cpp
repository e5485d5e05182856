#include "tmm/sampler.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "tmm/errors.hpp"

namespace tmm {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

// Box-Muller on top of the engine's raw output: std::normal_distribution is
// implementation-defined, this keeps draws reproducible across toolchains.
class Normal {
 public:
  explicit Normal(std::uint64_t seed) : eng_(seed) {}
  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do u1 = uniform(); while (u1 <= 0.0);
    u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

Eigen::MatrixXcd gue_matrix(int n, Normal& rng) {
  Eigen::MatrixXcd m(n, n);
  const double sd_off = std::sqrt(0.5 / n), sd_diag = std::sqrt(1.0 / n);
  for (int j = 0; j < n; ++j) {
    m(j, j) = sd_diag * rng();
    for (int i = j + 1; i < n; ++i) {
      const double re = sd_off * rng(), im = sd_off * rng();
      m(i, j) = {re, im};
      m(j, i) = {re, -im};
    }
  }
  return m;
}

std::vector<double> eigenvalues(const Eigen::MatrixXcd& m) {
  // Householder tridiagonalization followed by implicit symmetric QR.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

double site_energy(const std::vector<double>& y, int i, double yi, const Polynomial& w, int n) {
  double s = -n * w(yi);
  for (int j = 0; j < n; ++j)
    if (j != i) s += 2.0 * std::log(std::abs(yi - y[j]));
  return s;
}

}  // namespace

EigenSample sample_gue(int n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("sample_gue: n must be >= 1");
  Normal rng(seed);
  EigenSample s;
  s.n = n;
  s.seed = seed;
  s.values = eigenvalues(gue_matrix(n, rng));
  return s;
}

MetropolisRun metropolis_chain(const Polynomial& w_eff, int n, int steps, std::uint64_t seed, const ChainParams& chain) {
  if (w_eff.degree() < 2 || w_eff.degree() % 2 != 0 || w_eff.leading() <= 0.0)
    throw InvalidEffectivePotential("effective potential must have even degree and positive leading coefficient");
  if (n < 1 || steps < 1 || chain.burnin < 1) throw ValidationError("metropolis: n, steps and burnin must be >= 1");
  Normal rng(seed);
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = n == 1 ? 0.0 : -2.0 + 4.0 * (i + 0.5) / n;

  double step = n == 1 ? 1.0 : 1.0 / n;
  auto sweep = [&](int updates) {
    int acc = 0;
    for (int u = 0; u < updates; ++u) {
      const int i = static_cast<int>(rng.uniform() * n);
      const double prop = y[i] + step * rng();
      const double d = site_energy(y, i, prop, w_eff, n) - site_energy(y, i, y[i], w_eff, n);
      if (d >= 0.0 || rng.uniform() < std::exp(d)) {
        y[i] = prop;
        ++acc;
      }
    }
    return acc;
  };

  for (int b = 0; b < chain.burnin; ++b) {
    const double rate = static_cast<double>(sweep(n)) / n;
    if (rate > 0.5) step *= 1.1;
    else if (rate < 0.3) step *= 0.9;
  }

  MetropolisRun run;
  run.step = step;
  long long acc = 0, total = 0;
  const int per_state = std::max(1, chain.thin) * n;
  for (int s = 0; s < steps; ++s) {
    acc += sweep(per_state);
    total += per_state;
    std::vector<double> st = y;
    std::sort(st.begin(), st.end());
    run.states.push_back(std::move(st));
  }
  run.acceptance = static_cast<double>(acc) / static_cast<double>(total);
  return run;
}

EigenSample metropolis_one_matrix(const Polynomial& w_eff, int n, int steps, int burnin, std::uint64_t seed) {
  ChainParams cp;
  cp.burnin = burnin;
  auto run = metropolis_chain(w_eff, n, steps, seed, cp);
  EigenSample s;
  s.n = n;
  s.seed = seed;
  s.values = run.states.back();
  s.meta = {0.0, 0.0, burnin, steps};
  return s;
}

Polynomial m1_effective_potential(double alpha, double tau) {
  Polynomial w = quartic_potential(alpha);
  w -= Polynomial::monomial(2, 0.5 * tau * tau);
  if (w.degree() < 2 || w.degree() % 2 != 0 || w.leading() <= 0.0)
    throw InvalidEffectivePotential("effective potential is not confining");
  return w;
}

namespace {

EigenSample combine(double tau, int n, std::uint64_t gue_seed, const std::vector<double>& y) {
  Normal rng(gue_seed);
  Eigen::MatrixXcd m = gue_matrix(n, rng);
  for (int i = 0; i < n; ++i) m(i, i) += tau * y[i];
  EigenSample s;
  s.n = n;
  s.seed = gue_seed;
  s.values = eigenvalues(m);
  return s;
}

// Draw counts per chain: the first `count % chains` chains get one extra.
std::vector<int> split(int count, int chains) {
  std::vector<int> out(chains, count / chains);
  for (int k = 0; k < count % chains; ++k) ++out[k];
  return out;
}

std::vector<EigenSample> batch(double alpha, double tau, int n, int count, std::uint64_t seed, const ChainParams& chain,
                               bool parallel) {
  const Polynomial w = m1_effective_potential(alpha, tau);
  if (count < 1) throw ValidationError("sample count must be >= 1");
  const int chains = std::max(1, std::min(chain.chains, count));
  const auto share = split(count, chains);
  std::vector<int> offset(chains, 0);
  for (int k = 1; k < chains; ++k) offset[k] = offset[k - 1] + share[k - 1];
  std::vector<EigenSample> out(count);
  const std::uint64_t chain_root = derive_seed(seed, 0), gue_root = derive_seed(seed, 1);

  auto run_chain = [&](int k) {
    const auto run = metropolis_chain(w, n, share[k], derive_seed(chain_root, k), chain);
    for (int j = 0; j < share[k]; ++j) {
      const int idx = offset[k] + j;
      out[idx] = combine(tau, n, derive_seed(gue_root, idx), run.states[j]);
      out[idx].meta = {alpha, tau, chain.burnin, share[k]};
    }
  };
  if (parallel) {
    const int threads = chain.jobs > 0 ? chain.jobs : 0;
    if (threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
      for (int k = 0; k < chains; ++k) run_chain(k);
    } else {
#pragma omp parallel for schedule(dynamic)
      for (int k = 0; k < chains; ++k) run_chain(k);
    }
  } else {
    for (int k = 0; k < chains; ++k) run_chain(k);
  }
  return out;
}

}  // namespace

EigenSample sample_m1(double alpha, double tau, int n, std::uint64_t seed, const ChainParams& chain) {
  const Polynomial w = m1_effective_potential(alpha, tau);
  const auto run = metropolis_chain(w, n, 1, derive_seed(seed, 0), chain);
  EigenSample s = combine(tau, n, derive_seed(seed, 1), run.states.back());
  s.seed = seed;
  s.meta = {alpha, tau, chain.burnin, 1};
  return s;
}

std::vector<EigenSample> sample_m1_batch(double alpha, double tau, int n, int count, std::uint64_t seed,
                                         const ChainParams& chain) {
  return batch(alpha, tau, n, count, seed, chain, true);
}

std::vector<EigenSample> sample_m1_batch_serial(double alpha, double tau, int n, int count, std::uint64_t seed,
                                                const ChainParams& chain) {
  return batch(alpha, tau, n, count, seed, chain, false);
}

double wasserstein1(const std::vector<double>& values, const GridMeasure& mu) {
  std::vector<double> v(values);
  std::sort(v.begin(), v.end());
  const double total = mu.total_mass();
  if (v.empty() || !(total > 0.0)) throw ValidationError("wasserstein1: empty sample or measure");
  const int m = static_cast<int>(v.size());
  const double h = mu.width();

  // Breakpoints: all cell edges and sample points.
  std::vector<double> pts;
  pts.reserve(mu.cells + 1 + m);
  for (int i = 0; i <= mu.cells; ++i) pts.push_back(mu.edge(i));
  pts.insert(pts.end(), v.begin(), v.end());
  std::sort(pts.begin(), pts.end());

  // Prefix sums make each evaluation O(1).
  std::vector<double> prefix(mu.cells + 1, 0.0);
  for (int i = 0; i < mu.cells; ++i) prefix[i + 1] = prefix[i] + mu.density[i] * h;
  auto cdf = [&](double x) {
    if (x <= mu.left) return 0.0;
    if (x >= mu.right) return 1.0;
    const int i = std::min(mu.cells - 1, static_cast<int>((x - mu.left) / h));
    return (prefix[i] + mu.density[i] * (x - mu.edge(i))) / total;
  };

  double w = 0.0;
  int below = 0;  // samples <= current left breakpoint
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double a = pts[k], b = pts[k + 1];
    while (below < m && v[below] <= a) ++below;
    if (b <= a) continue;
    const double fe = static_cast<double>(below) / m;
    // F_mu is linear on [a, b]
    const double da = cdf(a) - fe, db = cdf(b) - fe;
    if (da * db >= 0.0) {
      w += 0.5 * (std::abs(da) + std::abs(db)) * (b - a);
    } else {
      const double t = da / (da - db);
      w += 0.5 * (std::abs(da) * t + std::abs(db) * (1.0 - t)) * (b - a);
    }
  }
  return w;
}

double wasserstein1(const EigenSample& sample, const GridMeasure& mu) { return wasserstein1(sample.values, mu); }

double kolmogorov_distance(std::vector<double> values, const std::function<double(double)>& cdf) {
  std::sort(values.begin(), values.end());
  const double m = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max({d, std::abs(f - i / m), std::abs((i + 1) / m - f)});
  }
  return d;
}

std::vector<double> pooled(const std::vector<EigenSample>& samples) {
  std::vector<double> out;
  for (const auto& s : samples) out.insert(out.end(), s.values.begin(), s.values.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tmm
