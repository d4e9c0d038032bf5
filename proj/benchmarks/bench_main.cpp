#include <benchmark/benchmark.h>

#include "meshcoop/allocation.hpp"
#include "meshcoop/barycentric.hpp"
#include "meshcoop/coalition.hpp"
#include "meshcoop/lp.hpp"
#include "meshcoop/partition.hpp"
#include "meshcoop/random.hpp"

namespace {

using namespace meshcoop;

Network case_study(std::uint64_t seed, int nodes = 20) {
  return build_network(generate_random(3, nodes, 3, Params{}, seed));
}

void BM_GrandCoalitionSolve(benchmark::State& state) {
  const Network net = case_study(7, static_cast<int>(state.range(0)));
  const CoalitionProgram prog = build_coalition_lp(net, Coalition::grand(3), DemandMode::elastic);
  lp::Options options;
  options.pricing = state.range(1) ? lp::Pricing::dantzig : lp::Pricing::bland;
  lp::Solver solver(options);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(prog.problem).value);
  state.counters["columns"] = static_cast<double>(prog.problem.num_vars());
  state.counters["rows"] = static_cast<double>(prog.problem.ineq_rows.size() + prog.problem.eq_rows.size());
}
// Args: nodes per provider, pricing (0 bland, 1 dantzig).
BENCHMARK(BM_GrandCoalitionSolve)->ArgsProduct({{10, 20, 30}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_CharacteristicFunction(benchmark::State& state) {
  const Network net = case_study(7);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(characteristic_function(net, DemandMode::elastic, threads));
}
BENCHMARK(BM_CharacteristicFunction)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Shapley(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  CharacteristicFunction cf(n);
  for (Coalition::Mask s = 1; s < (Coalition::Mask{1} << n); ++s) {
    cf.set(Coalition::from_mask(s), rng.uniform01() * Coalition::from_mask(s).size());
  }
  for (auto _ : state) benchmark::DoNotOptimize(shapley(cf).payoffs.data());
  state.SetComplexityN(n);
}
BENCHMARK(BM_Shapley)->DenseRange(3, 15, 4);

void BM_EnumeratePartitions(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_partitions(static_cast<int>(state.range(0))).size());
}
BENCHMARK(BM_EnumeratePartitions)->Arg(3)->Arg(6)->Arg(9);

void BM_FullAnalysis(benchmark::State& state) {
  const Network net = case_study(11);
  for (auto _ : state) {
    const auto cf = characteristic_function(net, DemandMode::elastic);
    const Allocation mu = dual_payoff(net, cf);
    const Allocation phi = shapley(cf);
    benchmark::DoNotOptimize(in_core(cf, mu).in_core);
    benchmark::DoNotOptimize(structure_table(net, cf).rows.size());
    const auto plot = barycentric_plot(cf, {to_barycentric(cf, mu, "dual payoff"), to_barycentric(cf, phi, "Shapley value")});
    benchmark::DoNotOptimize(render_barycentric_svg(plot).size());
  }
}
BENCHMARK(BM_FullAnalysis)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
