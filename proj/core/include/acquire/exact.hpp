#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "acquire/engine.hpp"
#include "acquire/graph.hpp"

namespace acquire {

/// Largest component the packed 4-bit state encoding can represent.
inline constexpr std::size_t kExactHardCap = 15;

class ExactCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactOptions {
  /// Largest connected component searched. Components are solved separately
  /// and their values added, so the cap applies per component.
  std::size_t cap = 10;
  /// Transposition-table entries kept per component (LRU eviction).
  std::size_t memo_limit = std::size_t{1} << 20;
  /// Search nodes allowed before giving up; 0 means unlimited.
  std::uint64_t node_budget = 0;
};

struct ExactResult {
  std::size_t value = 0;
  /// Replays to a residual of exactly `value` vertices.
  Protocol protocol;
  std::uint64_t nodes = 0;
};

/// Minimum residual size over all move sequences. The minimum over reachable
/// states equals the minimum over maximal sequences: a non-maximal state can
/// be extended and every move lowers the positive count by one.
/// Throws ExactCapExceeded if a component is larger than options.cap.
ExactResult exact_at(const Graph& g, const ExactOptions& options = {});

/// Plain depth-first search over all move sequences, no memo and no
/// decomposition. For cross-checking exact_at on tiny graphs.
std::size_t reference_at(const Graph& g);

struct BoundedResult {
  std::size_t lower = 0;
  std::size_t upper = 0;
  bool complete = false;
};

/// exact_at within `node_budget` search nodes. When the search does not
/// finish, lower = max(ball certificate, number of components) and upper =
/// the greedy residual. A budget of 0 skips the search entirely.
BoundedResult exact_at_bounded(const Graph& g, std::uint64_t node_budget,
                               std::size_t cap = kExactHardCap);

}  // namespace acquire
