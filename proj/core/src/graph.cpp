#include "acquire/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace acquire {

std::vector<VertexId> Graph::neighbors(VertexId v) const {
  std::vector<VertexId> out;
  for_each_neighbor(v, [&](VertexId u) { out.push_back(u); });
  std::sort(out.begin(), out.end());
  return out;
}

AdjacencyGraph AdjacencyGraph::from_edges(
    std::size_t n, std::span<const std::pair<VertexId, VertexId>> edges) {
  std::vector<std::pair<VertexId, VertexId>> arcs;
  arcs.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  AdjacencyGraph g;
  g.offsets_.assign(n + 1, 0);
  for (auto [u, v] : arcs) ++g.offsets_[u + 1];
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.targets_.reserve(arcs.size());
  for (auto [u, v] : arcs) g.targets_.push_back(v);
  return g;
}

AdjacencyGraph AdjacencyGraph::empty(std::size_t n) { return from_edges(n, {}); }

AdjacencyGraph AdjacencyGraph::path(std::size_t n) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(VertexId(i), VertexId(i + 1));
  return from_edges(n, e);
}

AdjacencyGraph AdjacencyGraph::cycle(std::size_t n) {
  if (n < 3) return path(n);
  std::vector<std::pair<VertexId, VertexId>> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(VertexId(i), VertexId((i + 1) % n));
  return from_edges(n, e);
}

AdjacencyGraph AdjacencyGraph::star(std::size_t leaves) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, VertexId(i));
  return from_edges(leaves + 1, e);
}

AdjacencyGraph AdjacencyGraph::complete(std::size_t n) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(VertexId(i), VertexId(j));
  return from_edges(n, e);
}

AdjacencyGraph AdjacencyGraph::disjoint_union(const AdjacencyGraph& a, const AdjacencyGraph& b) {
  auto e = a.edges();
  const auto shift = static_cast<VertexId>(a.vertex_count());
  for (auto [u, v] : b.edges()) e.emplace_back(u + shift, v + shift);
  return from_edges(a.vertex_count() + b.vertex_count(), e);
}

bool AdjacencyGraph::adjacent(VertexId u, VertexId v) const {
  if (u >= vertex_count() || v >= vertex_count()) return false;
  auto span = neighbor_span(u);
  return std::binary_search(span.begin(), span.end(), v);
}

void AdjacencyGraph::for_each_neighbor(VertexId v,
                                       const std::function<void(VertexId)>& fn) const {
  for (VertexId u : neighbor_span(v)) fn(u);
}

std::vector<std::pair<VertexId, VertexId>> AdjacencyGraph::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (VertexId u = 0; u < vertex_count(); ++u)
    for (VertexId v : neighbor_span(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

AdjacencyGraph parse_edge_list(std::string_view text, std::size_t min_vertices) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::size_t n = min_vertices;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    VertexId ids[2];
    int got = 0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r' || *p == ',')) ++p;
      if (p == end) break;
      if (got == 2) {
        throw std::runtime_error("edge list line " + std::to_string(line_no) +
                                 ": expected two vertex ids");
      }
      auto [next, ec] = std::from_chars(p, end, ids[got]);
      if (ec != std::errc{}) {
        throw std::runtime_error("edge list line " + std::to_string(line_no) +
                                 ": invalid vertex id");
      }
      ++got;
      p = next;
    }
    if (got == 0) continue;
    if (got != 2) {
      throw std::runtime_error("edge list line " + std::to_string(line_no) +
                               ": expected two vertex ids");
    }
    edges.emplace_back(ids[0], ids[1]);
    n = std::max<std::size_t>(n, std::size_t(std::max(ids[0], ids[1])) + 1);
  }
  return AdjacencyGraph::from_edges(n, edges);
}

std::vector<std::vector<VertexId>> connected_components(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<VertexId>> out;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<VertexId> comp;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      g.for_each_neighbor(v, [&](VertexId u) {
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      });
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

AdjacencyGraph induced_subgraph(const Graph& g, std::span<const VertexId> vertices) {
  std::vector<std::pair<VertexId, VertexId>> local;
  std::vector<std::pair<VertexId, VertexId>> index;  // (global, local)
  index.reserve(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) index.emplace_back(vertices[i], VertexId(i));
  std::sort(index.begin(), index.end());
  auto lookup = [&](VertexId global) -> long long {
    auto it = std::lower_bound(index.begin(), index.end(), std::make_pair(global, VertexId(0)));
    if (it == index.end() || it->first != global) return -1;
    return it->second;
  };
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    g.for_each_neighbor(vertices[i], [&](VertexId u) {
      const long long j = lookup(u);
      if (j > static_cast<long long>(i)) local.emplace_back(VertexId(i), VertexId(j));
    });
  }
  return AdjacencyGraph::from_edges(vertices.size(), local);
}

std::vector<std::size_t> bfs_distances(const Graph& g, VertexId source) {
  constexpr auto kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(g.vertex_count(), kInf);
  std::deque<VertexId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    g.for_each_neighbor(v, [&](VertexId u) {
      if (dist[u] == kInf) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    });
  }
  return dist;
}

}  // namespace acquire
