#include <benchmark/benchmark.h>

#include <cmath>

#include "acquire/certificates.hpp"
#include "acquire/upper_bound.hpp"

namespace acquire {
namespace {

void BM_BuildMaterialized(benchmark::State& state) {
  const PointSet pts = sample_points_fixed_n(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(GeometricGraph::build(pts, 3, AdjacencyMode::Materialized));
  }
}
BENCHMARK(BM_BuildMaterialized)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_BuildGridOnly(benchmark::State& state) {
  const PointSet pts = sample_points_fixed_n(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(GeometricGraph::build(pts, 8, AdjacencyMode::GridOnly));
  }
}
BENCHMARK(BM_BuildGridOnly)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_DangerousSquares(benchmark::State& state) {
  const GeometricGraph g = sample_fixed_n(1000000, 2, 1, AdjacencyMode::GridOnly);
  for (auto _ : state) benchmark::DoNotOptimize(dangerous_squares(g).value);
}
BENCHMARK(BM_DangerousSquares)->Unit(benchmark::kMillisecond);

void BM_BallCellBound(benchmark::State& state) {
  const GeometricGraph g = sample_fixed_n(100000, static_cast<double>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ball_counting_cap(g, 1 << 20, BallMode::CellBound).value);
  }
}
BENCHMARK(BM_BallCellBound)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

// One stratified large square with relaxed auxiliary lines.
void BM_EmbedGoodSquare(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0));
  const double side = 0.5 * r * std::log2(r);
  const TessellationPlan p0 = plan(side * side, r, 0.5, 0.01);
  const GeometricGraph g =
      GeometricGraph::build(sample_points_stratified(p0, 1), r, AdjacencyMode::GridOnly);
  const TessellationPlan p = classify(p0, g);
  UpperOptions o;
  o.embed.aux_spacing = r / 4;
  o.embed.strict_level_check = false;
  for (auto _ : state) benchmark::DoNotOptimize(full_protocol(g, p, o).residual_count);
}
BENCHMARK(BM_EmbedGoodSquare)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace acquire
