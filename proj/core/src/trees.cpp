#include "acquire/trees.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <stdexcept>

namespace acquire {

namespace {

// trim(d, n) as a pending node; n == 2^d is the untrimmed tree.
struct Pending {
  std::uint32_t d;
  std::uint64_t n;
  TrimmedTree::NodeId parent;
  std::uint32_t level;
};

std::vector<std::pair<std::uint32_t, std::uint64_t>> child_shapes(std::uint64_t n) {
  std::vector<std::pair<std::uint32_t, std::uint64_t>> out;
  if (n <= 1) return out;
  const auto k0 = static_cast<std::uint32_t>(std::bit_width(n) - 2);
  for (std::uint32_t j = 0; j <= k0; ++j) out.emplace_back(j, std::uint64_t{1} << j);
  const std::uint64_t rem = n - (std::uint64_t{1} << (k0 + 1));
  if (rem > 0) out.emplace_back(k0 + 1, rem);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

}  // namespace

TrimmedTree trim(std::uint32_t d, std::uint64_t n) {
  if (d > kMaxTreeExponent) throw std::invalid_argument("trim: d exceeds size guard");
  if (n < 1 || n > (std::uint64_t{1} << d)) {
    throw std::invalid_argument("trim: n must lie in [1, 2^d]");
  }
  TrimmedTree t;
  t.d_ = d;
  t.nodes_.reserve(n);
  std::deque<Pending> queue{{d, n, TrimmedTree::kNoParent, 0}};
  std::vector<std::uint64_t> sizes;
  while (!queue.empty()) {
    const Pending p = queue.front();
    queue.pop_front();
    const auto id = static_cast<TrimmedTree::NodeId>(t.nodes_.size());
    TrimmedTree::Node node;
    node.parent = p.parent;
    node.subtree_size = static_cast<std::uint32_t>(p.n);
    node.level = p.level;
    t.nodes_.push_back(std::move(node));
    if (p.parent != TrimmedTree::kNoParent) t.nodes_[p.parent].children.push_back(id);
    if (t.level_counts_.size() <= p.level) t.level_counts_.resize(p.level + 1, 0);
    ++t.level_counts_[p.level];
    for (auto [cd, cn] : child_shapes(p.n)) queue.push_back({cd, cn, id, p.level + 1});
  }
  return t;
}

TrimmedTree build_full(std::uint32_t i) {
  if (i > kMaxTreeExponent) throw std::invalid_argument("build_full: i exceeds size guard");
  return trim(i, std::uint64_t{1} << i);
}

std::vector<TrimmedTree::NodeId> TrimmedTree::subtree(NodeId id) const {
  std::vector<NodeId> out{id};
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (NodeId c : nodes_[out[head]].children) out.push_back(c);
  }
  return out;
}

AdjacencyGraph TrimmedTree::as_graph() const {
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(nodes_.size());
  for (NodeId v = 1; v < nodes_.size(); ++v) edges.emplace_back(nodes_[v].parent, v);
  return AdjacencyGraph::from_edges(nodes_.size(), edges);
}

std::string TrimmedTree::dump() const {
  std::string out;
  std::vector<NodeId> stack{0};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    out.append(2 * nodes_[v].level, ' ');
    out += std::to_string(v) + " (size " + std::to_string(nodes_[v].subtree_size) + ")\n";
    const auto& ch = nodes_[v].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

Protocol extract_protocol(const TrimmedTree& t) {
  Protocol p;
  p.moves.reserve(t.size() - 1);
  // Iterative post-order: (node, index of next child to visit).
  std::vector<std::pair<TrimmedTree::NodeId, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    const auto& node = t.node(v);
    if (next < node.children.size()) {
      const auto c = node.children[next++];
      stack.emplace_back(c, 0);
      continue;
    }
    if (node.parent != TrimmedTree::kNoParent) {
      const auto& siblings = t.node(node.parent).children;
      std::uint64_t held = 1;
      for (auto s : siblings) {
        if (s == v) break;
        held += t.node(s).subtree_size;
      }
      if (held < node.subtree_size) {
        throw std::logic_error("extract_protocol: child order violates the prefix property");
      }
      p.moves.push_back({v, node.parent});
    }
    stack.pop_back();
  }
  return p;
}

}  // namespace acquire
