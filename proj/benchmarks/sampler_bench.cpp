#include <benchmark/benchmark.h>

#include "forest/tree_sampler.hpp"
#include "grid.hpp"

namespace forest {
namespace {

void BM_SpanningTreeGrid(benchmark::State& state) {
  const Network net = bench::grid(static_cast<int>(state.range(0)));
  SpanningTreeSampler sampler(net);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample_branches(rng));
  state.SetItemsProcessed(state.iterations());
  state.counters["nodes"] = static_cast<double>(net.node_count());
}
BENCHMARK(BM_SpanningTreeGrid)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_ForestGridBoundary(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Network net = bench::grid(side);
  NodeSet boundary;
  for (int c = 0; c < side; ++c) {
    boundary.push_back(static_cast<NodeIndex>(c));
    boundary.push_back(static_cast<NodeIndex>((side - 1) * side + c));
  }
  ForestSampler sampler(net, boundary);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample_branches(rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ForestGridBoundary)->Arg(8)->Arg(16)->Arg(32);

void BM_BranchDraw(benchmark::State& state) {
  const Network net = bench::grid(16);
  BranchSampler pick(net);
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(pick.sample(rng));
}
BENCHMARK(BM_BranchDraw);

}  // namespace
}  // namespace forest
