#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace acquire {

using VertexId = std::uint32_t;

/// Read-only view of a simple undirected graph. The acquisition engine, the
/// exact solver and the certificates are written against this interface so
/// that they run unchanged on geometric instances and on hand-built graphs.
class Graph {
 public:
  virtual ~Graph() = default;

  virtual std::size_t vertex_count() const = 0;
  virtual bool adjacent(VertexId u, VertexId v) const = 0;
  virtual std::size_t degree(VertexId v) const = 0;
  virtual void for_each_neighbor(VertexId v,
                                 const std::function<void(VertexId)>& fn) const = 0;

  std::vector<VertexId> neighbors(VertexId v) const;
};

/// Compressed adjacency lists over vertices 0..n-1.
class AdjacencyGraph final : public Graph {
 public:
  AdjacencyGraph() = default;

  /// Duplicate edges are merged; self-loops and out-of-range endpoints throw.
  static AdjacencyGraph from_edges(std::size_t n,
                                   std::span<const std::pair<VertexId, VertexId>> edges);

  static AdjacencyGraph empty(std::size_t n);
  static AdjacencyGraph path(std::size_t n);
  static AdjacencyGraph cycle(std::size_t n);
  /// K_{1,leaves}; vertex 0 is the centre.
  static AdjacencyGraph star(std::size_t leaves);
  static AdjacencyGraph complete(std::size_t n);
  /// Vertex-disjoint union; vertices of `b` are shifted by a.vertex_count().
  static AdjacencyGraph disjoint_union(const AdjacencyGraph& a, const AdjacencyGraph& b);

  std::size_t vertex_count() const override { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  bool adjacent(VertexId u, VertexId v) const override;
  std::size_t degree(VertexId v) const override { return offsets_[v + 1] - offsets_[v]; }
  void for_each_neighbor(VertexId v, const std::function<void(VertexId)>& fn) const override;

  std::span<const VertexId> neighbor_span(VertexId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t edge_count() const { return targets_.size() / 2; }
  std::vector<std::pair<VertexId, VertexId>> edges() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> targets_;
};

/// Plain edge-list text: `u v` per line, 0-indexed, `#` starts a comment.
/// The vertex count is one past the largest id unless `min_vertices` is larger.
AdjacencyGraph parse_edge_list(std::string_view text, std::size_t min_vertices = 0);

/// Connected components as vertex lists, each sorted, ordered by smallest member.
std::vector<std::vector<VertexId>> connected_components(const Graph& g);

/// Subgraph induced by `vertices` (sorted or not); vertex i of the result is vertices[i].
AdjacencyGraph induced_subgraph(const Graph& g, std::span<const VertexId> vertices);

/// Breadth-first distances from `source`; unreachable vertices get SIZE_MAX.
std::vector<std::size_t> bfs_distances(const Graph& g, VertexId source);

}  // namespace acquire
