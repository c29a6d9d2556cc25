#include <benchmark/benchmark.h>

#include "acquire/engine.hpp"
#include "acquire/trees.hpp"
#include "acquire/upper_bound.hpp"

namespace acquire {
namespace {

void BM_ReplayTreeFunnel(benchmark::State& state) {
  const auto d = static_cast<std::uint32_t>(state.range(0));
  const TrimmedTree t = build_full(d);
  const AdjacencyGraph g = t.as_graph();
  const Protocol p = extract_protocol(t);
  for (auto _ : state) benchmark::DoNotOptimize(replay(g, p).positive_count());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.moves.size()));
}
BENCHMARK(BM_ReplayTreeFunnel)->Arg(10)->Arg(16);

void BM_ReplayWithProvenance(benchmark::State& state) {
  const TrimmedTree t = build_full(static_cast<std::uint32_t>(state.range(0)));
  const AdjacencyGraph g = t.as_graph();
  const Protocol p = extract_protocol(t);
  for (auto _ : state) {
    const WeightState s = replay(g, p, true);
    benchmark::DoNotOptimize(check_weight_caps(s).peak_weight);
  }
}
BENCHMARK(BM_ReplayWithProvenance)->Arg(10)->Arg(14);

void BM_GreedyUpper(benchmark::State& state) {
  const GeometricGraph g =
      sample_fixed_n(static_cast<std::size_t>(state.range(0)), 4, 1, AdjacencyMode::Materialized);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_upper(g).moves.size());
}
BENCHMARK(BM_GreedyUpper)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace acquire
