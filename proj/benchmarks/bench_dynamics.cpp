#include <cstdlib>
#include <random>

#include <benchmark/benchmark.h>

#include "edgeworth/dynamics.hpp"
#include "edgeworth/integrate.hpp"
#include "edgeworth/networks.hpp"
#include "edgeworth/scenario.hpp"
#include "edgeworth/sweep.hpp"

using namespace edgeworth;

namespace {

Matrix random_gradients(int m, int n) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(m * 131 + n));
  std::uniform_real_distribution<double> u(0.1, 3.0);
  Matrix g(m, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) g(k, i) = u(rng);
  }
  return g;
}

Scenario bundled(const char* name) {
  setenv("EDGEWORTH_SCENARIO_DIR", EDGEWORTH_SCENARIO_DIR, 0);
  return resolve_scenario(name);
}

void BM_NetworkTradeField(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  const GradientMatrix g{random_gradients(m, n)};
  const Matrix w = weights_from_probabilities(Vector::Constant(n, 1.0 / n)).weights;
  for (auto _ : state) benchmark::DoNotOptimize(network_trade_field(g, w));
}
BENCHMARK(BM_NetworkTradeField)->Args({3, 2})->Args({10, 3})->Args({50, 5});

void BM_MultilateralSolver(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GradientMatrix g{random_gradients(n + 1, n)};
  for (auto _ : state) benchmark::DoNotOptimize(multilateral_fair_solver(g));
}
BENCHMARK(BM_MultilateralSolver)->Arg(3)->Arg(6)->Arg(10);

void BM_Step(benchmark::State& state) {
  const Scenario s = bundled("table1_row1");
  const NetworkSpec net = s.network();
  const GradientMatrix g = gradient_matrix(s.endowments, s.params);
  for (auto _ : state) benchmark::DoNotOptimize(step(s.endowments, g, s.params, net, s.integrator, 1e-2));
}
BENCHMARK(BM_Step);

void BM_IntegrateToEquilibrium(benchmark::State& state) {
  const Scenario s = bundled("table1_row1");
  for (auto _ : state) benchmark::DoNotOptimize(integrate_to_equilibrium(s));
}
BENCHMARK(BM_IntegrateToEquilibrium)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  const Scenario s = bundled("table1_row1");
  const int resolution = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(s, resolution, 1));
}
BENCHMARK(BM_Sweep)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
