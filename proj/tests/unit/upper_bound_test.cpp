#include <gtest/gtest.h>

#include <cmath>

#include "acquire/upper_bound.hpp"
#include "test_support.hpp"

namespace acquire {
namespace {

using testing::points_graph;
using testing::replay_checked;

// Four roots on a clique, root i carrying weights[i] - 1 private leaves.
struct Fan {
  AdjacencyGraph graph;
  std::vector<TriangleEmbedding> parts;
};

Fan fan(const std::vector<Weight>& weights) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  const auto roots = static_cast<VertexId>(weights.size());
  for (VertexId i = 0; i < roots; ++i) {
    for (VertexId j = i + 1; j < roots; ++j) edges.emplace_back(i, j);
  }
  Fan f;
  VertexId next = roots;
  for (VertexId i = 0; i < roots; ++i) {
    TriangleEmbedding t;
    t.triangle = kTriangles[i % 4];
    t.z = weights[i];
    if (weights[i] > 0) t.root = i;
    for (Weight k = 1; k < weights[i]; ++k) {
      edges.emplace_back(i, next);
      t.protocol.moves.push_back({next, i});
      ++next;
    }
    f.parts.push_back(std::move(t));
  }
  f.graph = AdjacencyGraph::from_edges(next, edges);
  return f;
}

WeightState run_merge(const Fan& f, const Protocol& merge) {
  Protocol all;
  for (const auto& t : f.parts) {
    all.moves.insert(all.moves.end(), t.protocol.moves.begin(), t.protocol.moves.end());
  }
  all.moves.insert(all.moves.end(), merge.moves.begin(), merge.moves.end());
  return replay(f.graph, all);
}

TEST(Merge, LightestFirst) {
  const Fan f = fan({20, 3, 9, 5});
  const auto merge = merge_square(f.graph, f.parts);
  ASSERT_TRUE(merge);
  // 3 onto 5 (8), 8 onto 9 (17), 17 onto 20 (37).
  EXPECT_EQ(merge->moves, (std::vector<Move>{{1, 3}, {3, 2}, {2, 0}}));
  const WeightState s = run_merge(f, *merge);
  EXPECT_EQ(s.residual(), std::vector<VertexId>{0});
  EXPECT_EQ(s.weight(0), 37u);
}

TEST(Merge, EqualWeights) {
  const Fan f = fan({4, 4, 4, 4});
  const auto merge = merge_square(f.graph, f.parts);
  ASSERT_TRUE(merge);
  const WeightState s = run_merge(f, *merge);
  EXPECT_EQ(s.positive_count(), 1u);
  EXPECT_EQ(s.total_weight(), 16u);
}

TEST(Merge, EmptyTriangleIsSkipped) {
  const Fan f = fan({2, 0, 7, 1});
  const auto merge = merge_square(f.graph, f.parts);
  ASSERT_TRUE(merge);
  EXPECT_EQ(merge->moves.size(), 2u);
  const WeightState s = run_merge(f, *merge);
  EXPECT_EQ(s.positive_count(), 1u + 1u);  // the unused root 1 keeps its unit
  EXPECT_EQ(s.weight(2), 10u);
}

TEST(Merge, NonAdjacentRootsFail) {
  std::vector<TriangleEmbedding> parts(2);
  parts[0].root = 0;
  parts[0].z = 1;
  parts[1].root = 2;
  parts[1].z = 1;
  EXPECT_FALSE(merge_square(AdjacencyGraph::path(3), parts));
}

// Random root weights: the merge always replays to one vertex holding the sum.
TEST(MergeProperty, RandomWeights) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Weight> w(4);
    for (auto& x : w) x = rng.below(40);
    const Fan f = fan(w);
    const auto merge = merge_square(f.graph, f.parts);
    ASSERT_TRUE(merge);
    const WeightState s = run_merge(f, *merge);
    const Weight total = w[0] + w[1] + w[2] + w[3];
    for (VertexId i = 0; i < 4; ++i) {
      // A root-less part keeps its own unit.
      if (w[i] == 0) {
        EXPECT_EQ(s.weight(i), 1u);
      }
    }
    Weight heaviest = 0;
    for (VertexId i = 0; i < 4; ++i) {
      if (w[i] > 0) heaviest = std::max(heaviest, s.weight(i));
    }
    EXPECT_EQ(heaviest, total);
  }
}

TEST(Fallback, CellsPerSide) {
  // x = 1/4, r = 64: side 96, ceil(96 sqrt 2 / 64) = ceil(2.12) = 3.
  EXPECT_EQ(fallback_cells_per_side(96, 64), 3u);
  // 80 sqrt 2 / 32 = 3.54 -> 4.
  EXPECT_EQ(fallback_cells_per_side(80, 32), 4u);
  // Cell diagonal exactly r is nudged to the next count.
  EXPECT_EQ(fallback_cells_per_side(std::sqrt(2.0) * 10, 10), 3u);
  for (double side : {1.0, 7.3, 100.0, 333.3}) {
    for (double r : {1.0, 2.5, 9.0}) {
      const double m = static_cast<double>(fallback_cells_per_side(side, r));
      EXPECT_LE(std::sqrt(2.0) * side / m, r);
    }
  }
}

TEST(Fallback, NineCellsAtSixtyFour) {
  const double r = 64, side = 96;
  const TessellationPlan p0 = plan(side * side, r, 0.25, 0.5);
  ASSERT_EQ(p0.k, 1u);
  const GeometricGraph g = sample_fixed_n(9216, r, 5, AdjacencyMode::GridOnly);
  const TessellationPlan p = classify(p0, g);
  std::size_t residual = 0;
  const Protocol proto = fallback_bad_square(p, 0, g, &residual);
  EXPECT_EQ(residual, 9u);
  const auto check = replay_checked(g, proto);
  ASSERT_TRUE(check.error.empty()) << check.error;
  EXPECT_EQ(check.residual, residual);
  EXPECT_EQ(check.cap_violations, 0u);
}

TEST(Fallback, FiveInOneCell) {
  const TessellationPlan p0 = plan(80.0 * 80.0, 32, 0.5, 0.5);
  const GeometricGraph g =
      points_graph({{1, 1}, {2, 2}, {3, 1}, {1.5, 4}, {4, 4.5}}, p0.side, 32);
  const TessellationPlan p = classify(p0, g);
  std::size_t residual = 0;
  const Protocol proto = fallback_bad_square(p, 0, g, &residual);
  EXPECT_EQ(proto.moves.size(), 4u);
  EXPECT_EQ(residual, 1u);
  const WeightState s = replay(g, proto);
  EXPECT_EQ(s.positive_count(), 1u);
  EXPECT_EQ(s.weight(s.residual().front()), 5u);
}

TEST(FullProtocol, EmptyPlane) {
  const TessellationPlan p0 = plan(80.0 * 80.0 * 4, 32, 0.5, 0.5);
  const GeometricGraph g = points_graph({}, p0.side, 32);
  const UpperResult res = full_protocol(g, classify(p0, g));
  EXPECT_EQ(res.residual_count, 0u);
  EXPECT_TRUE(res.protocol.moves.empty());
}

UpperOptions relaxed(double r) {
  UpperOptions o;
  o.embed.aux_spacing = r / 4.0;
  o.embed.strict_level_check = false;
  return o;
}

TEST(FullProtocol, AllGoodSquaresLeaveOneEach) {
  const double side = 160;
  const TessellationPlan p0 = plan(side * side, 32, 0.5, 0.01);
  ASSERT_EQ(p0.k, 2u);
  const GeometricGraph g =
      GeometricGraph::build(sample_points_stratified(p0, 3), 32, AdjacencyMode::GridOnly);
  const TessellationPlan p = classify(p0, g);
  ASSERT_EQ(p.good_count(), 4u);
  const UpperResult res = full_protocol(g, p, relaxed(32));
  EXPECT_EQ(res.embedded_squares, 4u);
  EXPECT_EQ(res.residual_count, 4u);
  const auto check = replay_checked(g, res.protocol);
  ASSERT_TRUE(check.error.empty()) << check.error;
  EXPECT_EQ(check.residual, 4u);
  EXPECT_EQ(check.cap_violations, 0u);
  for (const auto& sq : res.squares) EXPECT_EQ(sq.kind, SquareOutcome::Kind::Embedded);
}

TEST(FullProtocol, FailuresDemoteToFallback) {
  const double side = 160;
  const TessellationPlan p0 = plan(side * side, 32, 0.5, 0.01);
  const GeometricGraph g =
      GeometricGraph::build(sample_points_stratified(p0, 4), 32, AdjacencyMode::GridOnly);
  const TessellationPlan p = classify(p0, g);
  const UpperResult res = full_protocol(g, p);  // literal options
  EXPECT_EQ(res.embedded_squares + res.demoted_squares, 4u);
  EXPECT_EQ(res.error1 + res.error2 + res.error3 + res.merge_failures, res.demoted_squares);
  const std::size_t cells = fallback_cells_per_side(p.large_side, 32);
  for (const auto& sq : res.squares) {
    if (sq.kind == SquareOutcome::Kind::Demoted) {
      EXPECT_TRUE(sq.error || sq.merge_failed);
      EXPECT_LE(sq.residual, cells * cells);
    }
  }
  EXPECT_EQ(replay_checked(g, res.protocol).residual, res.residual_count);
}

TEST(FullProtocol, SampledInstanceMatchesReplay) {
  for (double r : {3.0, 6.0, 12.0}) {
    const GeometricGraph g = sample_fixed_n(40000, r, 8);
    const TessellationPlan p = classify(plan(40000, r, 0.5, 0.9), g);
    for (bool force : {false, true}) {
      UpperOptions o = relaxed(r);
      o.force_fallback = force;
      const UpperResult res = full_protocol(g, p, o);
      const auto check = replay_checked(g, res.protocol);
      ASSERT_TRUE(check.error.empty()) << check.error;
      EXPECT_EQ(check.residual, res.residual_count);
      EXPECT_EQ(check.cap_violations, 0u);
      EXPECT_EQ(res.good_squares + res.bad_squares, p.square_count());
    }
  }
}

TEST(FullProtocol, WorkersDoNotChangeTheResult) {
  const GeometricGraph g = sample_fixed_n(20000, 5, 2);
  const TessellationPlan p = classify(plan(20000, 5, 0.5, 0.9), g);
  UpperOptions one = relaxed(5), four = relaxed(5);
  four.workers = 4;
  EXPECT_EQ(full_protocol(g, p, one).protocol, full_protocol(g, p, four).protocol);
}

TEST(Greedy, GridFunnelThenGreedy) {
  for (double r : {0.5, 1.5, 4.0}) {
    const GeometricGraph g = sample_fixed_n(5000, r, 3);
    const WeightState funnel = grid_funnel(g);
    const Protocol p = greedy_upper(g);
    const auto check = replay_checked(g, p);
    ASSERT_TRUE(check.error.empty()) << check.error;
    EXPECT_EQ(check.cap_violations, 0u);
    EXPECT_LE(check.residual, funnel.positive_count());
    EXPECT_TRUE(is_maximal(replay(g, p)));
  }
}

}  // namespace
}  // namespace acquire
