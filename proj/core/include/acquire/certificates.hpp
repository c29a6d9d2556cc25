#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acquire/engine.hpp"
#include "acquire/geometric_graph.hpp"

namespace acquire {

struct DangerousSquare {
  std::size_t index;
  std::size_t center_count;
  std::size_t total_count;
};

struct DangerousCertificate {
  bool applicable = false;
  std::string reason;  // why not applicable
  std::size_t value = 0;
  double r = 0;
  std::size_t squares_per_side = 0;
  double square_side = 0;
  double threshold = 0;  // 1200 (r lg r)^2
  /// Set when the chain "dangerous => one residual vertex" is not backed by
  /// the inequalities at this r: half the square side minus 1 must reach
  /// 9 r lg r, (floor(4 lg r) + 1) r must fit inside that margin, and
  /// 2^floor(4 lg r) must exceed the threshold.
  bool conditional = false;
  double border_margin = 0;       // side/2 - 1
  double required_margin = 0;     // 9 r lg r
  double path_reach = 0;          // (floor(4 lg r) + 1) r
  double acquired_weight = 0;     // 2^floor(4 lg r)
  std::vector<DangerousSquare> witness;
};

/// Counts squares of side ~20 r lg r whose unit centre disk holds a vertex
/// and whose total is below 1200 (r lg r)^2.
DangerousCertificate dangerous_squares(const GeometricGraph& g);

/// Recounts every square from raw coordinates without the cell grid and
/// checks the witness and value. Returns an empty string on success.
std::string verify_dangerous(const GeometricGraph& g, const DangerousCertificate& cert);

enum class BallMode {
  /// Exact closed-ball counts per vertex.
  Exact,
  /// Per-cell upper bounds on ball counts from a prefix-sum grid. Larger
  /// counts can only loosen the caps, so the bound stays valid.
  CellBound,
};

std::string to_string(BallMode m);
std::optional<BallMode> ball_mode_from_string(std::string_view s);

struct BallCap {
  /// Largest weight v can ever hold under the certificate.
  Weight cap;
  /// Ball level L whose count excluded the next weight; 0 if none.
  std::uint32_t level;
  /// Ball count (or its upper bound) at that level.
  std::size_t count;
  bool degree_limited;
};

struct BallCertificate {
  std::size_t value = 0;
  Weight budget = 0;
  BallMode mode = BallMode::Exact;
  /// Euclidean balls of radius L r for geometric graphs, BFS balls of
  /// radius L otherwise.
  bool geometric = false;
  std::vector<BallCap> caps;
};

/// A vertex holding weight w in (2^(L-1), 2^L] collected it from within L
/// moves, so w cannot exceed the ball count at level L. Weights above
/// `budget` are not examined. value = the fewest vertices whose caps can
/// together hold all n units.
BallCertificate ball_counting_cap(const Graph& g, Weight budget);
BallCertificate ball_counting_cap(const GeometricGraph& g, Weight budget,
                                  BallMode mode = BallMode::Exact);

/// Smallest k whose k largest caps sum to at least n.
std::size_t value_from_caps(std::vector<Weight> caps, std::size_t n);

/// Recomputes ball counts by brute force (all pairs) for `sample` vertices
/// chosen by `seed` (all vertices when sample >= n) and re-derives the value.
/// Returns an empty string on success.
std::string verify_ball(const GeometricGraph& g, const BallCertificate& cert,
                        std::size_t sample = SIZE_MAX, std::uint64_t seed = 0);

}  // namespace acquire
