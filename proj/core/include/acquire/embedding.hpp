#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "acquire/engine.hpp"
#include "acquire/tessellation.hpp"
#include "acquire/trees.hpp"

namespace acquire {

struct EmbedOptions {
  /// Raise Error 2 when the whole tree's level-i count exceeds R_i (literal
  /// rule). When false, only the current region's family is compared.
  bool strict_level_check = true;
  /// Split again a sub-region wider than r/3 instead of raising Error 1.
  bool resplit_wide_subregions = true;
  /// A region wider than r/3 holding a single rooted tree cannot be split;
  /// pack it as is instead of raising Error 1. Error 3 still guards edges.
  bool pack_unsplittable = true;
  /// Distance between consecutive auxiliary lines. 0 keeps 10 y r, which
  /// leaves a single strip whenever ell = 20.
  double aux_spacing = 0;
};

struct EmbedError {
  enum class Kind { Error1, Error2, Error3 };
  Kind kind;
  std::size_t region = 0;
  std::size_t level = 0;
  /// Error1: sub-interval width. Error2: R_i. Error3: edge length.
  double measurement = 0;
  /// Error2: required level count. Otherwise unused.
  double required = 0;
  std::string detail;
};

std::string to_string(EmbedError::Kind k);

/// One processed auxiliary region. Angles are s/t in the local frame, so the
/// region's width at depth t is (alpha_hi - alpha_lo) t.
struct RegionRecord {
  std::size_t id;
  std::size_t level;
  double alpha_lo;
  double alpha_hi;
  /// Depth of the line L_{i-1} the region hangs from.
  double top;
  std::size_t q;  // Q_i
  std::size_t r;  // R_i, when packed
  bool split;
  /// Depth of L_i after packing, when vertices remain.
  std::optional<double> separator;
};

struct EmbedDiagnostics {
  /// The vertex nearest the apex was not the shallowest one.
  bool root_relocated = false;
  std::size_t splits = 0;
  std::size_t unsplittable_packs = 0;
  /// Smallest min(side)/Q over splits; at least 1/4 in the analysed regime.
  double min_split_balance = 1.0;
  std::size_t splits_below_quarter = 0;
  /// Packings that assigned fewer than R_i/2 vertices.
  std::size_t packings_below_half = 0;
  double max_edge_length = 0;
  /// The analysed bound 50 y r + r/3 on embedded edge length.
  double edge_length_bound = 0;
  std::size_t edges_over_bound = 0;
  /// Separating lines L_i (i >= 4) lying above A_{i-4}.
  std::size_t separators_lagging = 0;
  /// Largest (A_{i-4} depth - L_i depth) seen; positive means some L_i sat
  /// above A_{i-4}.
  double worst_separator_lag = -1e300;
};

struct TriangleEmbedding {
  Triangle triangle;
  std::size_t square;
  std::size_t z = 0;
  double z_lower = 0;
  double z_upper = 0;
  /// Absent when the triangle is empty.
  std::optional<TrimmedTree> tree;
  /// tree node -> graph vertex.
  std::vector<VertexId> assignment;
  std::optional<VertexId> root;
  /// Depths of A_0 .. A_{ell/20}.
  std::vector<double> aux_lines;
  std::vector<RegionRecord> regions;
  /// Moves on graph vertices funnelling the triangle onto its root.
  Protocol protocol;
  EmbedDiagnostics diagnostics;
};

using EmbedResult = std::variant<TriangleEmbedding, EmbedError>;

/// Embeds trim(d, z) on the z vertices of one triangle of a large square so
/// that tree edges become graph edges, then returns the funnel protocol.
EmbedResult embed_triangle(const TessellationPlan& plan, std::size_t square, Triangle tri,
                           const GeometricGraph& g, const EmbedOptions& options = {});

}  // namespace acquire
