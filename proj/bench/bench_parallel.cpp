// Parallel kernels against their serial reference paths.
#include <benchmark/benchmark.h>

#include "tmm/biorthogonal.hpp"
#include "tmm/equilibrium.hpp"
#include "tmm/log_kernel.hpp"
#include "tmm/rh.hpp"
#include "tmm/sampler.hpp"

namespace {

void bm_self_interaction(benchmark::State& st) {
  const auto g = tmm::GridMeasure::make(-3, 3, static_cast<int>(st.range(1)));
  const auto ex = st.range(0) ? tmm::Exec::Parallel : tmm::Exec::Serial;
  for (auto _ : st) benchmark::DoNotOptimize(tmm::self_interaction(g, ex));
}
BENCHMARK(bm_self_interaction)->Args({0, 400})->Args({1, 400})->Args({0, 800})->Args({1, 800})
    ->Unit(benchmark::kMillisecond);

void bm_matvec(benchmark::State& st) {
  const auto g = tmm::GridMeasure::make(-3, 3, 800);
  const auto a = tmm::self_interaction(g);
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(800);
  const auto ex = st.range(0) ? tmm::Exec::Parallel : tmm::Exec::Serial;
  for (auto _ : st) benchmark::DoNotOptimize(tmm::matvec(a, x, ex));
}
BENCHMARK(bm_matvec)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void bm_one_matrix_solve(benchmark::State& st) {
  const auto g = tmm::GridMeasure::make(-3, 3, 400);
  tmm::SolverOptions opt;
  opt.exec = st.range(0) ? tmm::Exec::Parallel : tmm::Exec::Serial;
  for (auto _ : st) benchmark::DoNotOptimize(tmm::solve_one_matrix(tmm::gaussian_potential(), g, 20000, 1e-6, opt));
}
BENCHMARK(bm_one_matrix_solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(2);

void bm_sampler_batch(benchmark::State& st) {
  tmm::ChainParams chain;
  chain.burnin = 50;
  for (auto _ : st) {
    if (st.range(0))
      benchmark::DoNotOptimize(tmm::sample_m1_batch(0.0, 1.0, 40, 16, 7, chain));
    else
      benchmark::DoNotOptimize(tmm::sample_m1_batch_serial(0.0, 1.0, 40, 16, 7, chain));
  }
}
BENCHMARK(bm_sampler_batch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(2);

void bm_bimoments(benchmark::State& st) {
  const auto pp = tmm::PotentialPair::quartic(0.0, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(tmm::bimoments(pp, 6, static_cast<int>(st.range(0))));
}
BENCHMARK(bm_bimoments)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond)->Iterations(2);

void bm_pearcey(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(tmm::pearcey_kernel(0.5, -0.3, 1.0, static_cast<int>(st.range(0))));
}
BENCHMARK(bm_pearcey)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
