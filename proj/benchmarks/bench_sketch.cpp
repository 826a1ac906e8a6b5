#include <benchmark/benchmark.h>

#include "hcforge/baselines.hpp"
#include "hcforge/rng.hpp"
#include "hcforge/sketch.hpp"

using namespace hcforge;

namespace {

void BM_FindBalancedEdge(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng rng(11);
  HcTree tree = random_binary_tree(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(find_balanced_edge(tree).child);
}
BENCHMARK(BM_FindBalancedEdge)->Arg(256)->Arg(1024)->Arg(4096);

void BM_BuildEdgeSetF(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng rng(11);
  HcTree tree = random_binary_tree(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(build_edge_set_F(tree, 1.0 / 16.0).size());
}
BENCHMARK(BM_BuildEdgeSetF)->Arg(256)->Arg(1024)->Arg(4096);

void BM_RevPipeline(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng rng(11);
  HcTree tree = random_binary_tree(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(rev_pipeline(tree, 1.0 / 12.0).root);
}
BENCHMARK(BM_RevPipeline)->Arg(256)->Arg(1024)->Arg(4096);

void BM_DisPipeline(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng rng(11);
  HcTree tree = random_binary_tree(n, rng);
  Rng comb(13);
  for (auto _ : state) benchmark::DoNotOptimize(dis_pipeline(tree, 1.0 / 6.0, comb).root);
}
BENCHMARK(BM_DisPipeline)->Arg(256)->Arg(1024)->Arg(4096);

}  // namespace
