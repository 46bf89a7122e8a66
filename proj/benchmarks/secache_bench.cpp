#include <vector>

#include <benchmark/benchmark.h>

#include "secache/analytic.hpp"
#include "secache/catalog.hpp"
#include "secache/optimizer.hpp"
#include "secache/simulator.hpp"
#include "secache/special_functions.hpp"

namespace {

using namespace secache;

// z spans the direct-series, Pfaff and integral branches.
void BM_Hyp2f1(benchmark::State& state) {
  const double z = -static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(hyp2f1_1b(2.0 / 3.0, z));
}
BENCHMARK(BM_Hyp2f1)->Arg(3)->Arg(30)->Arg(300);

void BM_SecrecyExact(benchmark::State& state) {
  const auto prm = NetworkParams::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(secrecy_probability_exact(0.5, prm));
}
BENCHMARK(BM_SecrecyExact);

void BM_SolveOcp(benchmark::State& state) {
  const int F = static_cast<int>(state.range(0));
  const auto prm = NetworkParams::defaults();
  const auto cat = make_catalog(F, 0.7, sample_secrecy_levels(F, 0.5, 7), F / 2);
  const auto caps = placement_caps(cat, prm);
  for (auto _ : state) benchmark::DoNotOptimize(solve_ocp(cat, prm, caps).objective);
}
BENCHMARK(BM_SolveOcp)->Arg(10)->Arg(100)->Arg(1000);

// Cost per Monte Carlo trial (hit, 10 files).
void BM_SimulateHitTrials(benchmark::State& state) {
  const auto prm = NetworkParams::defaults();
  SimConfig cfg;
  cfg.trials = 100;
  cfg.threads = 1;
  const std::vector<double> p(10, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_conditional_hit(p, prm, cfg));
    ++cfg.seed;
  }
  state.SetItemsProcessed(state.iterations() * cfg.trials);
}
BENCHMARK(BM_SimulateHitTrials)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
