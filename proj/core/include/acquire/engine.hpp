#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "acquire/graph.hpp"

namespace acquire {

using Weight = std::uint64_t;

/// Transfer all weight from `src` onto its neighbour `dst`.
struct Move {
  VertexId src = 0;
  VertexId dst = 0;
  friend bool operator==(const Move&, const Move&) = default;
};

struct Protocol {
  std::vector<Move> moves;
  /// When present, replay() checks that exactly these vertices stay positive.
  std::optional<std::vector<VertexId>> declared_residual;

  friend bool operator==(const Protocol&, const Protocol&) = default;
};

enum class MoveError {
  NotAdjacent,
  SourceEmpty,
  DestinationTooLight,
};

std::string to_string(MoveError e);

class IllegalMove : public std::runtime_error {
 public:
  IllegalMove(Move m, MoveError cause);
  Move move() const { return move_; }
  MoveError cause() const { return cause_; }

 private:
  Move move_;
  MoveError cause_;
};

class IllegalMoveAt : public std::runtime_error {
 public:
  IllegalMoveAt(std::size_t index, Move m, MoveError cause);
  std::size_t index() const { return index_; }
  Move move() const { return move_; }
  MoveError cause() const { return cause_; }

 private:
  std::size_t index_;
  Move move_;
  MoveError cause_;
};

class ResidualMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Opt-in bookkeeping for check_weight_caps(). For every vertex it keeps the
/// units it currently holds, each tagged with the number of moves that unit
/// has travelled. A unit's travel path is a walk in the graph, so the hop
/// count bounds its graph distance to the holder from above.
struct Provenance {
  struct Unit {
    VertexId origin;
    std::uint32_t hops;
  };
  struct Event {
    VertexId vertex;
    Weight weight;
    std::uint32_t max_hops;
  };
  std::vector<std::vector<Unit>> held;
  /// Largest hop count among the units in held[v].
  std::vector<std::uint32_t> max_hops;
  /// One entry per move: the receiving vertex after the move.
  std::vector<Event> events;
};

/// Per-vertex weights over a borrowed graph plus the trace of applied moves.
/// The graph must outlive the state.
class WeightState {
 public:
  explicit WeightState(const Graph& graph, bool track_provenance = false);

  const Graph& graph() const { return *graph_; }
  const std::vector<Weight>& weights() const { return weights_; }
  Weight weight(VertexId v) const { return weights_[v]; }
  const std::vector<Move>& trace() const { return trace_; }
  /// Every legal move empties its source and leaves its destination positive,
  /// so the count drops by exactly one per move. Hence a state reachable in m
  /// moves has n - m positives, any non-maximal state extends without raising
  /// the count, and the minimum over reachable states equals the minimum over
  /// maximal protocols.
  std::size_t positive_count() const { return positive_; }
  Weight total_weight() const;
  const std::optional<Provenance>& provenance() const { return provenance_; }

  /// Why `m` would be illegal, or nullopt if it may be applied.
  std::optional<MoveError> check(Move m) const;
  /// Throws IllegalMove and leaves the state unchanged when `m` is illegal.
  void apply(Move m);

  /// Positive-weight vertices in increasing order.
  std::vector<VertexId> residual() const;

 private:
  const Graph* graph_;
  std::vector<Weight> weights_;
  std::vector<Move> trace_;
  std::size_t positive_;
  std::optional<Provenance> provenance_;
};

/// Replays `protocol` from the all-ones state. Throws IllegalMoveAt at the
/// first illegal move and ResidualMismatch if a declared residual disagrees.
WeightState replay(const Graph& graph, const Protocol& protocol, bool track_provenance = false);

/// True iff no legal move remains. Any two adjacent positive vertices admit a
/// move from the lighter onto the heavier, so this is exactly "the positive
/// vertices form an independent set".
bool is_maximal(const WeightState& state);

struct CapViolation {
  enum class Kind { DegreeCap, ProvenanceRadius };
  Kind kind;
  VertexId vertex;
  Weight weight;
  std::size_t degree;
  std::uint32_t radius;
};

struct CapReport {
  std::vector<CapViolation> violations;
  Weight peak_weight = 1;
  /// Largest hop count of any unit at any time.
  std::uint32_t max_radius = 0;
  std::size_t events_checked = 0;
  bool ok() const { return violations.empty(); }
};

/// Checks, for every weight any vertex ever held, that w <= 2^deg(v) and that
/// every contributing unit travelled at most lg w moves. Requires a state
/// built with provenance tracking; throws std::logic_error otherwise.
CapReport check_weight_caps(const WeightState& state);

/// Lightest-first greedy: repeatedly moves the lightest positive vertex that
/// has a legal move onto its heaviest eligible neighbour, until maximal.
/// Continues from the current state.
void greedy_complete(WeightState& state);

/// greedy_complete() from the all-ones state.
Protocol greedy_protocol(const Graph& graph);

}  // namespace acquire
