#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acquire/engine.hpp"
#include "acquire/graph.hpp"

namespace acquire {

/// Rooted tree stored as an arena. Node 0 is the root and ids follow BFS
/// order, so every node's parent has a smaller id and levels are contiguous.
/// Children are ordered by non-decreasing subtree size.
class TrimmedTree {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kNoParent = UINT32_MAX;

  struct Node {
    NodeId parent = kNoParent;
    std::vector<NodeId> children;
    std::uint32_t subtree_size = 1;
    std::uint32_t level = 0;
  };

  std::uint32_t d() const { return d_; }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(NodeId id) const { return nodes_[id]; }
  const std::vector<Node>& nodes() const { return nodes_; }

  /// level_counts()[l] = number of nodes at distance l from the root.
  const std::vector<std::size_t>& level_counts() const { return level_counts_; }
  std::size_t depth() const { return level_counts_.size() - 1; }

  /// Nodes of the subtree rooted at `id`, in BFS order.
  std::vector<NodeId> subtree(NodeId id) const;

  /// The tree as an undirected graph on node ids.
  AdjacencyGraph as_graph() const;

  /// Indented text, one node per line.
  std::string dump() const;

 private:
  friend TrimmedTree trim(std::uint32_t d, std::uint64_t n);

  std::uint32_t d_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::size_t> level_counts_;
};

inline constexpr std::uint32_t kMaxTreeExponent = 30;

/// The tree whose root has children of shapes build_full(0..i-1); 2^i nodes.
/// Throws std::invalid_argument for i > kMaxTreeExponent.
TrimmedTree build_full(std::uint32_t i);

/// Sub-tree of build_full(d) on exactly n nodes: keep the branches of size
/// 1, 2, ..., 2^k0 whole (k0 = floor(lg n) - 1), recursively trim the next
/// branch to the remaining n - 2^(k0+1) nodes, and drop the rest.
/// Throws std::invalid_argument unless 1 <= n <= 2^d.
TrimmedTree trim(std::uint32_t d, std::uint64_t n);

/// Moves on node ids that funnel every unit onto the root: post-order, each
/// node's children in non-decreasing subtree-size order. Legal from all-ones
/// because a node that has absorbed children of sizes s_0 <= ... <= s_{i-1}
/// holds 1 + sum s_j >= s_i when child i arrives.
Protocol extract_protocol(const TrimmedTree& t);

}  // namespace acquire
