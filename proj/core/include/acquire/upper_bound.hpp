#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "acquire/embedding.hpp"
#include "acquire/engine.hpp"
#include "acquire/tessellation.hpp"

namespace acquire {

/// Folds the roots of a square's embedded triangles onto one vertex, lightest
/// first: the running accumulator and the next root always move lighter onto
/// heavier. Returns nullopt if two roots are not adjacent in `g`.
std::optional<Protocol> merge_square(const Graph& g,
                                     std::span<const TriangleEmbedding> triangles);

/// Cells per side used by the fallback on a square of side `side`: the
/// smallest m with cell diagonal sqrt(2) side/m <= r.
std::size_t fallback_cells_per_side(double side, double r);

/// Cuts the square into a cell grid whose cells are cliques and funnels each
/// non-empty cell onto the vertex nearest the cell centre. Assumes the
/// square's vertices are untouched (weight 1).
Protocol fallback_bad_square(const TessellationPlan& plan, std::size_t square,
                             const GeometricGraph& g, std::size_t* residual = nullptr);

struct SquareOutcome {
  enum class Kind { Empty, Embedded, Fallback, Demoted };
  Kind kind = Kind::Empty;
  std::size_t residual = 0;
  std::optional<EmbedError::Kind> error;
  bool merge_failed = false;
};

struct UpperOptions {
  EmbedOptions embed;
  /// Handle every square with the fallback grid.
  bool force_fallback = false;
  unsigned workers = 1;
};

struct UpperResult {
  Protocol protocol;
  std::size_t residual_count = 0;
  std::size_t good_squares = 0;
  std::size_t bad_squares = 0;
  std::size_t embedded_squares = 0;
  std::size_t demoted_squares = 0;
  std::size_t error1 = 0;
  std::size_t error2 = 0;
  std::size_t error3 = 0;
  std::size_t merge_failures = 0;
  std::vector<SquareOutcome> squares;
};

/// Embed-and-merge on Good squares, fallback on Bad ones; a Good square whose
/// embedding or merge fails is demoted to the fallback. `p` must be classified.
UpperResult full_protocol(const GeometricGraph& g, const TessellationPlan& p,
                          const UpperOptions& options = {});

/// Funnels every non-empty cell of a global grid with cell side <= r/sqrt(2)
/// onto one vertex. Returns the state after those moves.
WeightState grid_funnel(const GeometricGraph& g);

/// grid_funnel() followed by greedy_complete().
Protocol greedy_upper(const GeometricGraph& g);

}  // namespace acquire
