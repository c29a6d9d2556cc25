#include <algorithm>
#include <cstdint>

#include "acquire/engine.hpp"

namespace acquire {

void greedy_complete(WeightState& state) {
  const Graph& g = state.graph();
  std::vector<VertexId> order;
  // Degrees are costly on grid-only graphs and only positive vertices need one.
  std::vector<std::size_t> degree_cache(g.vertex_count(), SIZE_MAX);
  auto degree = [&](VertexId v) {
    if (degree_cache[v] == SIZE_MAX) degree_cache[v] = g.degree(v);
    return degree_cache[v];
  };
  for (bool moved = true; moved;) {
    moved = false;
    order = state.residual();
    // Ties go to low-degree vertices so that hubs absorb rather than leave.
    std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
      if (state.weight(a) != state.weight(b)) return state.weight(a) < state.weight(b);
      return degree(a) < degree(b);
    });
    for (VertexId u : order) {
      const Weight wu = state.weight(u);
      if (wu == 0) continue;
      VertexId best = u;
      Weight best_w = 0;
      g.for_each_neighbor(u, [&](VertexId v) {
        const Weight wv = state.weight(v);
        if (wv < wu || wv == 0) return;
        if (wv > best_w || (wv == best_w && v < best)) {
          best = v;
          best_w = wv;
        }
      });
      if (best != u) {
        state.apply({u, best});
        moved = true;
      }
    }
  }
}

Protocol greedy_protocol(const Graph& graph) {
  WeightState state(graph);
  greedy_complete(state);
  return Protocol{state.trace(), std::nullopt};
}

}  // namespace acquire
