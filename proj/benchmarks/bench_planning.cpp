#include <benchmark/benchmark.h>

#include "spanmdp/spanmdp.hpp"

namespace {

using namespace spanmdp;

Mdp garnet(benchmark::State& state) {
  const auto S = static_cast<std::size_t>(state.range(0));
  return generate_garnet(S, 4, std::max<std::size_t>(2, S / 5), 1);
}

void BM_DiscountedValueIteration(benchmark::State& state) {
  const Mdp m = garnet(state);
  for (auto _ : state) benchmark::DoNotOptimize(solve_discounted_optimal(m, 0.99));
}
BENCHMARK(BM_DiscountedValueIteration)->Arg(10)->Arg(50)->Arg(200);

void BM_RelativeValueIteration(benchmark::State& state) {
  const Mdp m = garnet(state);
  for (auto _ : state) benchmark::DoNotOptimize(solve_average_optimal(m));
}
BENCHMARK(BM_RelativeValueIteration)->Arg(10)->Arg(50)->Arg(200);

void BM_EmpiricalModel(benchmark::State& state) {
  const GenerativeModel g(generate_garnet(50, 4, 10, 2), 3);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(build_empirical_model(g, n, trial++));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * 50 * 4));
}
BENCHMARK(BM_EmpiricalModel)->Arg(16)->Arg(256)->Arg(4096);

void BM_Algorithm2Chain(benchmark::State& state) {
  const GenerativeModel g(generate_chain(5, 0.2), 4);
  const Alg2Config cfg{static_cast<std::size_t>(state.range(0)), 0.3, 4.507331378269784, 0, 0};
  std::uint64_t trial = 0;
  for (auto _ : state) {
    Alg2Config c = cfg;
    c.seed = c.trial = trial++;
    benchmark::DoNotOptimize(run_algorithm2(g, c));
  }
}
BENCHMARK(BM_Algorithm2Chain)->Arg(64)->Arg(1024);

void BM_AuditInstance(benchmark::State& state) {
  const Mdp m = generate_garnet(5, 3, 3, 7);
  AuditOptions opts;
  opts.max_multistep_horizon = 4;
  for (auto _ : state) benchmark::DoNotOptimize(audit_instance(m, 0.9, opts));
}
BENCHMARK(BM_AuditInstance);

}  // namespace

BENCHMARK_MAIN();
