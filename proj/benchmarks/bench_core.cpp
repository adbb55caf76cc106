#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "nlch/diagnostics.hpp"
#include "nlch/dynamics.hpp"
#include "nlch/kernel.hpp"
#include "nlch/spectral.hpp"

namespace {

using namespace nlch;

Grid grid_for(const benchmark::State& state) {
  return Grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 1.0);
}

Kernel gaussian(const Grid& g, double sigma) {
  const double amp = 2.0 / std::pow(2.0 * M_PI * sigma * sigma, g.dim() / 2.0);
  return build_kernel(KernelFamily::gaussian, {amp, sigma, 0.0}, g);
}

Field noise(const Grid& g) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Field f(g);
  for (double& v : f.values()) v = u(rng);
  return f;
}

void BM_Convolve(benchmark::State& state) {
  const Grid g = grid_for(state);
  const Kernel k = gaussian(g, 0.05);
  const Field f = noise(g);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(k, f));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_Convolve)->Args({1, 1024})->Args({2, 128})->Args({3, 32});

void BM_Energy(benchmark::State& state) {
  const Grid g = grid_for(state);
  const Kernel k = gaussian(g, 0.05);
  const Field f = noise(g);
  const PotentialParams p{1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(energy(f, k, p));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_Energy)->Args({1, 1024})->Args({2, 128});

// Steps from a phase-separated state, where the inner solver does most work.
void BM_StepSeparated(benchmark::State& state) {
  const Grid g = grid_for(state);
  const Kernel k = gaussian(g, 0.1);
  const PotentialParams p{1.0, 2.0};
  StepperConfig cfg;
  cfg.dt = 1e-3;
  SimState s = init_state(g, k, p, NoisyConstant{0.0, 0.05, 3}, 0.01);
  RunOptions quiet;
  quiet.row_stride = 1 << 30;
  quiet.check_invariants = false;
  s = run(std::move(s), 0.4, cfg, k, p, quiet).state;
  Stepper stepper(k, p, cfg);
  long iters = 0;
  for (auto _ : state) {
    SimState copy = s;
    iters += stepper.step(copy, cfg.dt).inner_iters;
  }
  state.counters["inner_iters"] = benchmark::Counter(static_cast<double>(iters), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_StepSeparated)->Args({1, 128})->Args({2, 64})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
