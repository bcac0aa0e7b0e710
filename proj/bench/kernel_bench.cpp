// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "visa/bench.hpp"
#include "visa/graph_gen.hpp"
#include "visa/ising.hpp"
#include "visa/landscape.hpp"

using namespace visa;

static void BM_BruteForceSerial(benchmark::State& state) {
  const auto J = sk_instance(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_ground_serial(J).energy);
  state.counters["configs/s"] =
      benchmark::Counter(static_cast<double>(1 << (state.range(0) - 1)), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_BruteForceSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_BruteForceParallel(benchmark::State& state) {
  const auto J = sk_instance(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_ground(J).energy);
  state.counters["configs/s"] =
      benchmark::Counter(static_cast<double>(1 << (state.range(0) - 1)), benchmark::Counter::kIsIterationInvariantRate);
  state.counters["threads"] = omp_get_max_threads();
}
BENCHMARK(BM_BruteForceParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

static void pgs(benchmark::State& state, bool parallel) {
  const auto J = mobius_ladder(8, 0.4);
  const SolverKind kind = static_cast<SolverKind>(state.range(0));
  const SolverConfig cfg = default_config(kind);
  const double ref = brute_force_ground(J).energy;
  for (auto _ : state) {
    const auto s = parallel ? ground_state_stats(J, cfg, 100, ref, 1) : ground_state_stats_serial(J, cfg, 100, ref, 1);
    benchmark::DoNotOptimize(s.successes);
  }
  state.SetLabel(to_string(kind));
}
static void BM_PgsSerial(benchmark::State& state) { pgs(state, false); }
static void BM_PgsParallel(benchmark::State& state) { pgs(state, true); }
BENCHMARK(BM_PgsSerial)
    ->Arg(static_cast<int>(SolverKind::visa))
    ->Arg(static_cast<int>(SolverKind::svl))
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PgsParallel)
    ->Arg(static_cast<int>(SolverKind::visa))
    ->Arg(static_cast<int>(SolverKind::svl))
    ->Unit(benchmark::kMillisecond);

static void BM_CriticalPoints(benchmark::State& state) {
  const auto J = mobius_ladder(8, 0.4);
  LandscapeParams lp;
  lp.gamma = -0.087;
  lp.P = 0.32;
  for (auto _ : state) benchmark::DoNotOptimize(find_critical_points(J, lp, 200, 1).points.size());
}
BENCHMARK(BM_CriticalPoints)->Unit(benchmark::kMillisecond);

static void BM_VisaRhs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto J = sk_instance(n, 2);
  VectorState x = VectorState::Random(n, 3);
  const Vec gamma = Vec::Constant(n, 0.3);
  VectorState out(n, 3);
  for (auto _ : state) {
    visa_rhs(x, gamma, 0.5, 4.0, J.weights(), out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_VisaRhs)->Arg(8)->Arg(100)->Arg(400);

BENCHMARK_MAIN();
