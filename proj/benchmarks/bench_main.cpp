#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include "jkoflow/kernel.hpp"
#include "jkoflow/metrics.hpp"
#include "jkoflow/oracle.hpp"
#include "jkoflow/transport.hpp"

using namespace jkoflow;

namespace {

GridDensity smooth_bump(const GridPtr& g) {
  return GridDensity::cell_average(g, [](double x) { return std::max(0.0, 1.0 - x * x); });
}

std::vector<double> random_values(int n) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

static void BM_Convolve(benchmark::State& state) {
  const GridPtr g = make_grid(4.0, static_cast<int>(state.range(0)));
  const KernelTable tab(g);
  const auto v = random_values(g->size());
  for (auto _ : state) benchmark::DoNotOptimize(convolve(v, tab));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Convolve)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

static void BM_ConvolveDirect(benchmark::State& state) {
  const GridPtr g = make_grid(4.0, static_cast<int>(state.range(0)));
  const KernelTable tab(g);
  const auto v = random_values(g->size());
  for (auto _ : state) benchmark::DoNotOptimize(convolve_direct(v, tab));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvolveDirect)->RangeMultiplier(4)->Range(256, 4096)->Complexity(benchmark::oNSquared);

static void BM_ToParticles(benchmark::State& state) {
  const GridPtr g = make_grid(4.0, 1024);
  const auto rho = smooth_bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(to_particles(rho, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ToParticles)->Arg(400)->Arg(1600);

static void BM_JkoStep(benchmark::State& state) {
  const GridPtr g = make_grid(4.0, 1024);
  const KernelTable tab(g);
  const auto rho = smooth_bump(g);
  const auto beta = support_set(rho, 0.0);
  ModelSpec spec;
  JkoConfig cfg;
  cfg.particles = static_cast<int>(state.range(0));
  const ParticleDensity prev = to_particles(rho, cfg.particles);
  for (auto _ : state) benchmark::DoNotOptimize(jko_step_particles(prev, beta, 1e-3, spec, cfg, tab));
}
BENCHMARK(BM_JkoStep)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

static void BM_W2(benchmark::State& state) {
  const GridPtr g = make_grid(4.0, 1024);
  const auto a = smooth_bump(g);
  const auto b = GridDensity::cell_average(g, [](double x) { return std::max(0.0, 1.0 - (x - 0.3125) * (x - 0.3125)); });
  for (auto _ : state) benchmark::DoNotOptimize(w2_1d(a, b));
}
BENCHMARK(BM_W2);

static void BM_FvInterval(benchmark::State& state) {
  const GridPtr g = make_grid(4.0, static_cast<int>(state.range(0)));
  const KernelTable tab(g);
  const auto rho = smooth_bump(g);
  ModelSpec spec;
  FvConfig cfg;
  cfg.horizon = cfg.record_interval = 1e-3;
  cfg.adaptive = true;
  for (auto _ : state) benchmark::DoNotOptimize(fv_run(rho, spec, cfg, tab));
}
BENCHMARK(BM_FvInterval)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
