// Microbenchmarks for the hot paths: the allocator, the two scenario runners,
// gain sampling, and the large-system solvers.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "blmac/asymptotic.hpp"
#include "blmac/channel.hpp"
#include "blmac/experiments.hpp"
#include "blmac/quadrature.hpp"
#include "blmac/simulator.hpp"
#include "blmac/waterfill.hpp"

using namespace blmac;

namespace {

WaterfillProblem make_problem(int channels) {
  std::mt19937_64 rng = derive_trial_seed(17, static_cast<std::uint64_t>(channels));
  WaterfillProblem problem;
  problem.candidates.reserve(channels);
  for (int i = 0; i < channels; ++i)
    problem.candidates.push_back({i, 0.1 + 5.0 * uniform_unit(rng)});
  problem.budget = 0.5 * channels;
  return problem;
}

void bm_water_fill(benchmark::State& state) {
  const WaterfillProblem problem = make_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(water_fill(problem));
  }
}
BENCHMARK(bm_water_fill)->Arg(8)->Arg(64)->Arg(512);

void bm_sample_gains(benchmark::State& state) {
  const NetworkConfig cfg = NetworkConfig::from_snr_db(25, 50, 10.0);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_gains(cfg, {42, trial++}));
  }
}
BENCHMARK(bm_sample_gains);

void bm_run_partition(benchmark::State& state) {
  const NetworkConfig cfg = NetworkConfig::from_snr_db(25, 50, 10.0);
  const GainMatrix gains = sample_gains(cfg, {42, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_partition(gains, cfg));
  }
}
BENCHMARK(bm_run_partition);

void bm_run_partition_capped(benchmark::State& state) {
  const NetworkConfig cfg = NetworkConfig::from_snr_db(25, 50, 10.0);
  const GainMatrix gains = sample_gains(cfg, {42, 0});
  const BLPolicy bl = BLPolicy::capped(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_partition(gains, cfg, bl));
  }
}
BENCHMARK(bm_run_partition_capped);

void bm_run_sharing(benchmark::State& state) {
  const NetworkConfig cfg = NetworkConfig::from_snr_db(25, 50, 10.0);
  const GainMatrix gains = sample_gains(cfg, {42, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_sharing(gains, cfg));
  }
}
BENCHMARK(bm_run_sharing);

void bm_run_trials_point(benchmark::State& state) {
  const NetworkConfig cfg = NetworkConfig::from_snr_db(25, 50, 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_trials({cfg, Scenario::partition, BLPolicy::capped(3)}, 50, 42));
  }
}
BENCHMARK(bm_run_trials_point);

void bm_integrate_exponential(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate_semi_infinite([](double x) { return x * x; }, 0.25));
  }
}
BENCHMARK(bm_integrate_exponential);

void bm_solve_beta_star(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_beta_star(1.0, 10.0));
  }
}
BENCHMARK(bm_solve_beta_star);

void bm_chain_quadrature(benchmark::State& state) {
  const AsymptoticConfig cfg = AsymptoticConfig::from_snr_db(10.0, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_beta_chain(cfg));
  }
}
BENCHMARK(bm_chain_quadrature);

void bm_chain_monte_carlo(benchmark::State& state) {
  AsymptoticConfig cfg = AsymptoticConfig::from_snr_db(10.0, 4);
  cfg.mc_samples = 20000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_beta_chain(cfg));
  }
}
BENCHMARK(bm_chain_monte_carlo);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
