#include <benchmark/benchmark.h>

#include "hcforge/generators.hpp"
#include "hcforge/hcc_approx.hpp"
#include "hcforge/partition.hpp"
#include "hcforge/rng.hpp"

using namespace hcforge;

namespace {

void BM_PartitionLocalSearch(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng gen(17);
  Instance inst = random_instance(n, 0.8, false, gen);
  PartitionTarget target = PartitionTarget::make(4, 0.05, 0.2, Channel::Sim);
  for (int i = 0; i < 4; ++i) target.alpha[std::size_t(i)] = n / 4.0;
  double total = inst.total_sim();
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) target.set_beta(i, j, total / 10.0);
  for (auto _ : state) {
    Rng rng(std::uint64_t(state.iterations()));
    benchmark::DoNotOptimize(
        solve_partition(inst, target, PartitionBackend::LocalSearch, rng).found);
  }
}
BENCHMARK(BM_PartitionLocalSearch)->Arg(50)->Arg(100)->Arg(200);

void BM_GreedyCaterpillar(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng gen(19);
  Instance inst = random_instance(n, 0.8, true, gen);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_caterpillar(inst).root);
}
BENCHMARK(BM_GreedyCaterpillar)->Arg(64)->Arg(128)->Arg(256);

void BM_MubLocalSearch(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng gen(23);
  Instance inst = random_instance(n, 0.8, false, gen);
  for (auto _ : state) {
    Rng rng(std::uint64_t(state.iterations()));
    benchmark::DoNotOptimize(max_uncut_bisection(inst, MubBackend::LocalSearch, rng).uncut_weight);
  }
}
BENCHMARK(BM_MubLocalSearch)->Arg(32)->Arg(64)->Arg(128);

}  // namespace
