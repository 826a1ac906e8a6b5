#include <benchmark/benchmark.h>

#include "hcforge/baselines.hpp"
#include "hcforge/generators.hpp"
#include "hcforge/objectives.hpp"
#include "hcforge/rng.hpp"

using namespace hcforge;

namespace {

Instance bench_instance(int n) {
  Rng rng(42);
  return random_instance(n, 0.7, true, rng);
}

void BM_EvalRevenue(benchmark::State& state) {
  const int n = int(state.range(0));
  Instance inst = bench_instance(n);
  Rng rng(7);
  HcTree tree = random_binary_tree(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(eval_revenue(inst, tree));
  state.SetComplexityN(n);
}
BENCHMARK(BM_EvalRevenue)->Arg(64)->Arg(256)->Arg(1024)->Complexity(benchmark::oNSquared);

void BM_EvalHcc(benchmark::State& state) {
  const int n = int(state.range(0));
  Instance inst = bench_instance(n);
  Rng rng(7);
  HcTree tree = random_multiway_tree(n, 0.4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(eval_hcc(inst, tree).hcc);
}
BENCHMARK(BM_EvalHcc)->Arg(64)->Arg(256)->Arg(1024);

void BM_LcaSizeTable(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng rng(7);
  HcTree tree = random_binary_tree(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(lca_size_table(tree).sizes(0, 1));
}
BENCHMARK(BM_LcaSizeTable)->Arg(64)->Arg(256)->Arg(1024);

void BM_AverageLinkage(benchmark::State& state) {
  const int n = int(state.range(0));
  Instance inst = bench_instance(n);
  for (auto _ : state) benchmark::DoNotOptimize(average_linkage(inst, Channel::Sim).root);
}
BENCHMARK(BM_AverageLinkage)->Arg(32)->Arg(128)->Arg(256);

}  // namespace
