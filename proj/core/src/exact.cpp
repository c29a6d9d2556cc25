#include "acquire/exact.hpp"

#include <algorithm>
#include <list>
#include <unordered_map>

#include "acquire/certificates.hpp"

namespace acquire {

namespace {

using Key = std::uint64_t;

Weight get(Key k, std::size_t v) { return (k >> (4 * v)) & 0xF; }
Key set(Key k, std::size_t v, Weight w) {
  return (k & ~(Key{0xF} << (4 * v))) | (static_cast<Key>(w) << (4 * v));
}

class BudgetExhausted {};

class LruMemo {
 public:
  explicit LruMemo(std::size_t limit) : limit_(std::max<std::size_t>(limit, 1)) {}

  const std::uint8_t* find(Key k) {
    auto it = index_.find(k);
    if (it == index_.end()) return nullptr;
    order_.splice(order_.begin(), order_, it->second);
    return &it->second->second;
  }

  void put(Key k, std::uint8_t value) {
    if (auto it = index_.find(k); it != index_.end()) {
      it->second->second = value;
      order_.splice(order_.begin(), order_, it->second);
      return;
    }
    if (index_.size() >= limit_) {
      index_.erase(order_.back().first);
      order_.pop_back();
    }
    order_.emplace_front(k, value);
    index_[k] = order_.begin();
  }

 private:
  std::size_t limit_;
  std::list<std::pair<Key, std::uint8_t>> order_;
  std::unordered_map<Key, std::list<std::pair<Key, std::uint8_t>>::iterator> index_;
};

// Search over one connected component, vertices 0..n-1.
class ComponentSolver {
 public:
  ComponentSolver(const AdjacencyGraph& g, const ExactOptions& options, std::uint64_t& nodes)
      : g_(g), n_(g.vertex_count()), memo_(options.memo_limit), budget_(options.node_budget),
        nodes_(nodes) {}

  Key initial() const {
    Key k = 0;
    for (std::size_t v = 0; v < n_; ++v) k = set(k, v, 1);
    return k;
  }

  std::uint8_t solve(Key k) {
    if (const auto* hit = memo_.find(k)) return *hit;
    if (budget_ != 0 && nodes_ >= budget_) throw BudgetExhausted{};
    ++nodes_;
    std::uint8_t best = static_cast<std::uint8_t>(positive(k));
    for (const Move& m : moves(k)) {
      if (best == 1) break;
      best = std::min(best, solve(apply(k, m)));
    }
    memo_.put(k, best);
    return best;
  }

  std::vector<Move> witness(Key k) {
    std::vector<Move> out;
    std::uint8_t target = solve(k);
    while (positive(k) != target) {
      for (const Move& m : moves(k)) {
        const Key next = apply(k, m);
        if (solve(next) == target) {
          out.push_back(m);
          k = next;
          break;
        }
      }
    }
    return out;
  }

 private:
  std::size_t positive(Key k) const {
    std::size_t c = 0;
    for (std::size_t v = 0; v < n_; ++v) c += get(k, v) > 0 ? 1 : 0;
    return c;
  }

  // Legal moves, lightest source first.
  std::vector<Move> moves(Key k) const {
    std::vector<Move> out;
    for (VertexId u = 0; u < n_; ++u) {
      const Weight wu = get(k, u);
      if (wu == 0) continue;
      for (VertexId v : g_.neighbor_span(u)) {
        if (get(k, v) >= wu) out.push_back({u, v});
      }
    }
    std::stable_sort(out.begin(), out.end(), [&](const Move& a, const Move& b) {
      return get(k, a.src) < get(k, b.src);
    });
    return out;
  }

  static Key apply(Key k, Move m) {
    const Weight merged = get(k, m.dst) + get(k, m.src);
    return set(set(k, m.src, 0), m.dst, merged);
  }

  const AdjacencyGraph& g_;
  std::size_t n_;
  LruMemo memo_;
  std::uint64_t budget_;
  std::uint64_t& nodes_;
};

AdjacencyGraph copy_of(const Graph& g) {
  std::vector<VertexId> all(g.vertex_count());
  for (VertexId v = 0; v < all.size(); ++v) all[v] = v;
  return induced_subgraph(g, all);
}

std::size_t reference_search(const AdjacencyGraph& g, std::vector<Weight>& w,
                             std::size_t positive) {
  std::size_t best = positive;
  for (VertexId u = 0; u < w.size(); ++u) {
    if (w[u] == 0) continue;
    for (VertexId v : g.neighbor_span(u)) {
      if (w[v] < w[u]) continue;
      const Weight wu = w[u], wv = w[v];
      w[v] = wu + wv;
      w[u] = 0;
      best = std::min(best, reference_search(g, w, positive - 1));
      w[u] = wu;
      w[v] = wv;
    }
  }
  return best;
}

}  // namespace

ExactResult exact_at(const Graph& g, const ExactOptions& options) {
  const std::size_t cap = std::min(options.cap, kExactHardCap);
  const auto components = connected_components(g);
  for (const auto& comp : components) {
    if (comp.size() > cap) {
      throw ExactCapExceeded("component of " + std::to_string(comp.size()) +
                             " vertices exceeds the exact-search cap of " + std::to_string(cap));
    }
  }
  ExactResult out;
  for (const auto& comp : components) {
    if (comp.size() == 1) {
      ++out.value;
      continue;
    }
    const AdjacencyGraph sub = induced_subgraph(g, comp);
    ComponentSolver solver(sub, options, out.nodes);
    const Key start = solver.initial();
    out.value += solver.solve(start);
    for (const Move& m : solver.witness(start)) out.protocol.moves.push_back({comp[m.src], comp[m.dst]});
  }
  return out;
}

std::size_t reference_at(const Graph& g) {
  const AdjacencyGraph copy = copy_of(g);
  std::vector<Weight> w(copy.vertex_count(), 1);
  return reference_search(copy, w, w.size());
}

BoundedResult exact_at_bounded(const Graph& g, std::uint64_t node_budget, std::size_t cap) {
  if (node_budget > 0) {
    try {
      ExactOptions options;
      options.cap = cap;
      options.node_budget = node_budget;
      const auto res = exact_at(g, options);
      return {res.value, res.value, true};
    } catch (const BudgetExhausted&) {
    } catch (const ExactCapExceeded&) {
    }
  }
  BoundedResult out;
  out.lower = std::max(ball_counting_cap(g, static_cast<Weight>(g.vertex_count())).value,
                       connected_components(g).size());
  WeightState state(g);
  greedy_complete(state);
  out.upper = state.positive_count();
  return out;
}

}  // namespace acquire
