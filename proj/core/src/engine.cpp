#include "acquire/engine.hpp"

#include <algorithm>
#include <numeric>

namespace acquire {

std::string to_string(MoveError e) {
  switch (e) {
    case MoveError::NotAdjacent: return "NotAdjacent";
    case MoveError::SourceEmpty: return "SourceEmpty";
    case MoveError::DestinationTooLight: return "DestinationTooLight";
  }
  return "Unknown";
}

namespace {

std::string describe(Move m, MoveError cause) {
  return "illegal move " + std::to_string(m.src) + " -> " + std::to_string(m.dst) + ": " +
         to_string(cause);
}

}  // namespace

IllegalMove::IllegalMove(Move m, MoveError cause)
    : std::runtime_error(describe(m, cause)), move_(m), cause_(cause) {}

IllegalMoveAt::IllegalMoveAt(std::size_t index, Move m, MoveError cause)
    : std::runtime_error("move #" + std::to_string(index) + ": " + describe(m, cause)),
      index_(index),
      move_(m),
      cause_(cause) {}

WeightState::WeightState(const Graph& graph, bool track_provenance)
    : graph_(&graph), weights_(graph.vertex_count(), 1), positive_(graph.vertex_count()) {
  if (track_provenance) {
    provenance_.emplace();
    provenance_->held.resize(graph.vertex_count());
    provenance_->max_hops.assign(graph.vertex_count(), 0);
    for (VertexId v = 0; v < graph.vertex_count(); ++v) provenance_->held[v].push_back({v, 0});
  }
}

Weight WeightState::total_weight() const {
  return std::accumulate(weights_.begin(), weights_.end(), Weight{0});
}

std::optional<MoveError> WeightState::check(Move m) const {
  if (m.src == m.dst || !graph_->adjacent(m.src, m.dst)) return MoveError::NotAdjacent;
  if (weights_[m.src] == 0) return MoveError::SourceEmpty;
  if (weights_[m.dst] < weights_[m.src]) return MoveError::DestinationTooLight;
  return std::nullopt;
}

void WeightState::apply(Move m) {
  if (auto err = check(m)) throw IllegalMove(m, *err);
  Weight merged = 0;
  if (__builtin_add_overflow(weights_[m.dst], weights_[m.src], &merged)) {
    throw std::overflow_error("weight overflow at vertex " + std::to_string(m.dst));
  }
  if (provenance_) {
    auto& from = provenance_->held[m.src];
    auto& to = provenance_->held[m.dst];
    for (auto u : from) {
      ++u.hops;
      to.push_back(u);
    }
    from.clear();
    from.shrink_to_fit();
    auto& hops = provenance_->max_hops;
    const std::uint32_t max_hops = std::max(hops[m.dst], hops[m.src] + 1);
    hops[m.dst] = max_hops;
    hops[m.src] = 0;
    provenance_->events.push_back({m.dst, merged, max_hops});
  }
  weights_[m.dst] = merged;
  weights_[m.src] = 0;
  --positive_;
  trace_.push_back(m);
}

std::vector<VertexId> WeightState::residual() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < weights_.size(); ++v)
    if (weights_[v] > 0) out.push_back(v);
  return out;
}

WeightState replay(const Graph& graph, const Protocol& protocol, bool track_provenance) {
  WeightState state(graph, track_provenance);
  for (std::size_t i = 0; i < protocol.moves.size(); ++i) {
    const Move m = protocol.moves[i];
    if (m.src >= graph.vertex_count() || m.dst >= graph.vertex_count()) {
      throw IllegalMoveAt(i, m, MoveError::NotAdjacent);
    }
    if (auto err = state.check(m)) throw IllegalMoveAt(i, m, *err);
    state.apply(m);
  }
  if (protocol.declared_residual) {
    auto declared = *protocol.declared_residual;
    std::sort(declared.begin(), declared.end());
    if (declared != state.residual()) {
      throw ResidualMismatch("declared residual does not match replayed residual");
    }
  }
  return state;
}

bool is_maximal(const WeightState& state) {
  const Graph& g = state.graph();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (state.weight(v) == 0) continue;
    bool found = false;
    g.for_each_neighbor(v, [&](VertexId u) {
      if (state.weight(u) > 0) found = true;
    });
    if (found) return false;
  }
  return true;
}

namespace {

bool exceeds_pow2(Weight w, std::size_t exponent) {
  if (exponent >= 63) return false;
  return w > (Weight{1} << exponent);
}

}  // namespace

CapReport check_weight_caps(const WeightState& state) {
  if (!state.provenance()) {
    throw std::logic_error("check_weight_caps: state was built without provenance tracking");
  }
  const Graph& g = state.graph();
  CapReport report;
  std::vector<std::size_t> degree_cache(g.vertex_count(), SIZE_MAX);
  for (const auto& e : state.provenance()->events) {
    ++report.events_checked;
    report.peak_weight = std::max(report.peak_weight, e.weight);
    report.max_radius = std::max(report.max_radius, e.max_hops);
    auto& deg = degree_cache[e.vertex];
    if (deg == SIZE_MAX) deg = g.degree(e.vertex);
    if (exceeds_pow2(e.weight, deg)) {
      report.violations.push_back(
          {CapViolation::Kind::DegreeCap, e.vertex, e.weight, deg, e.max_hops});
    }
    // hops <= lg w  <=>  2^hops <= w
    if (e.max_hops >= 64 || (Weight{1} << e.max_hops) > e.weight) {
      report.violations.push_back(
          {CapViolation::Kind::ProvenanceRadius, e.vertex, e.weight, deg, e.max_hops});
    }
  }
  return report;
}

}  // namespace acquire
