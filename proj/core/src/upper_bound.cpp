#include "acquire/upper_bound.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace acquire {

std::optional<Protocol> merge_square(const Graph& g,
                                     std::span<const TriangleEmbedding> triangles) {
  struct Root {
    VertexId v;
    Weight w;
  };
  std::vector<Root> roots;
  for (const auto& t : triangles) {
    if (t.root) roots.push_back({*t.root, t.z});
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (!g.adjacent(roots[i].v, roots[j].v)) return std::nullopt;
    }
  }
  std::stable_sort(roots.begin(), roots.end(),
                   [](const Root& a, const Root& b) { return a.w < b.w; });
  Protocol p;
  if (roots.empty()) return p;
  Root acc = roots.front();
  for (std::size_t i = 1; i < roots.size(); ++i) {
    const Root next = roots[i];
    if (acc.w <= next.w) {
      p.moves.push_back({acc.v, next.v});
      acc = {next.v, acc.w + next.w};
    } else {
      p.moves.push_back({next.v, acc.v});
      acc.w += next.w;
    }
  }
  return p;
}

std::size_t fallback_cells_per_side(double side, double r) {
  if (side <= 0.0) return 1;
  auto m = static_cast<std::size_t>(std::max(1.0, snapped_ceil(side * std::sqrt(2.0) / r)));
  // Small margin so cells stay cliques despite rounding at their borders.
  while (2.0 * (side / static_cast<double>(m)) * (side / static_cast<double>(m)) >
         r * r * (1.0 - 1e-9)) {
    ++m;
  }
  return m;
}

namespace {

// Funnels each non-empty cell of an m x m grid over the square at `origin`
// onto the member nearest the cell centre. Appends to `out`; returns the
// number of non-empty cells.
std::size_t funnel_cells(const GeometricGraph& g, std::span<const VertexId> vertices,
                         Point origin, double side, std::vector<Move>& out) {
  if (vertices.empty()) return 0;
  const std::size_t m = fallback_cells_per_side(side, g.radius());
  const double cell = side / static_cast<double>(m);
  auto index = [&](double v) {
    const double f = std::floor(v / cell);
    if (!(f > 0.0)) return std::size_t{0};
    return std::min(static_cast<std::size_t>(f), m - 1);
  };
  std::vector<std::pair<std::size_t, VertexId>> keyed;
  keyed.reserve(vertices.size());
  for (VertexId v : vertices) {
    const Point p = g.point(v);
    keyed.emplace_back(index(p.y - origin.y) * m + index(p.x - origin.x), v);
  }
  std::sort(keyed.begin(), keyed.end());
  std::size_t cells = 0;
  for (std::size_t lo = 0; lo < keyed.size();) {
    std::size_t hi = lo;
    while (hi < keyed.size() && keyed[hi].first == keyed[lo].first) ++hi;
    const std::size_t id = keyed[lo].first;
    const Point centre{origin.x + (static_cast<double>(id % m) + 0.5) * cell,
                       origin.y + (static_cast<double>(id / m) + 0.5) * cell};
    VertexId acc = keyed[lo].second;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const VertexId v = keyed[i].second;
      if (squared_distance(g.point(v), centre) < squared_distance(g.point(acc), centre)) acc = v;
    }
    for (std::size_t i = lo; i < hi; ++i) {
      if (keyed[i].second != acc) out.push_back({keyed[i].second, acc});
    }
    ++cells;
    lo = hi;
  }
  return cells;
}

struct SquareWork {
  std::vector<Move> moves;
  SquareOutcome outcome;
};

SquareWork process_square(const GeometricGraph& g, const TessellationPlan& p, std::size_t sq,
                          const UpperOptions& options) {
  SquareWork work;
  const auto members = p.square_members(sq);
  if (members.empty()) return work;
  const bool good = p.squares[sq].status == SquareStatus::Good;
  if (good && !options.force_fallback) {
    std::vector<TriangleEmbedding> parts;
    for (Triangle tri : kTriangles) {
      auto res = embed_triangle(p, sq, tri, g, options.embed);
      if (auto* err = std::get_if<EmbedError>(&res)) {
        work.outcome.error = err->kind;
        break;
      }
      parts.push_back(std::move(std::get<TriangleEmbedding>(res)));
    }
    if (!work.outcome.error) {
      if (auto merge = merge_square(g, parts)) {
        for (const auto& part : parts) {
          work.moves.insert(work.moves.end(), part.protocol.moves.begin(),
                            part.protocol.moves.end());
        }
        work.moves.insert(work.moves.end(), merge->moves.begin(), merge->moves.end());
        work.outcome.kind = SquareOutcome::Kind::Embedded;
        work.outcome.residual = 1;
        return work;
      }
      work.outcome.merge_failed = true;
    }
  }
  work.outcome.kind = good && !options.force_fallback ? SquareOutcome::Kind::Demoted
                                                      : SquareOutcome::Kind::Fallback;
  work.outcome.residual = funnel_cells(g, members, p.square_origin(sq), p.large_side, work.moves);
  return work;
}

}  // namespace

Protocol fallback_bad_square(const TessellationPlan& plan, std::size_t square,
                             const GeometricGraph& g, std::size_t* residual) {
  Protocol p;
  const std::size_t cells = funnel_cells(g, plan.square_members(square),
                                         plan.square_origin(square), plan.large_side, p.moves);
  if (residual) *residual = cells;
  return p;
}

UpperResult full_protocol(const GeometricGraph& g, const TessellationPlan& p,
                          const UpperOptions& options) {
  const std::size_t count = p.square_count();
  if (p.squares.size() != count) {
    throw std::logic_error("full_protocol: plan has not been classified");
  }
  std::vector<SquareWork> works(count);
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, count));
  if (workers == 1) {
    for (std::size_t sq = 0; sq < count; ++sq) works[sq] = process_square(g, p, sq, options);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t sq; (sq = next.fetch_add(1)) < count;) {
          works[sq] = process_square(g, p, sq, options);
        }
      });
    }
  }

  UpperResult out;
  out.squares.reserve(count);
  for (std::size_t sq = 0; sq < count; ++sq) {
    auto& w = works[sq];
    if (p.squares[sq].status == SquareStatus::Good) {
      ++out.good_squares;
    } else {
      ++out.bad_squares;
    }
    out.residual_count += w.outcome.residual;
    switch (w.outcome.kind) {
      case SquareOutcome::Kind::Embedded: ++out.embedded_squares; break;
      case SquareOutcome::Kind::Demoted: ++out.demoted_squares; break;
      default: break;
    }
    if (w.outcome.error) {
      switch (*w.outcome.error) {
        case EmbedError::Kind::Error1: ++out.error1; break;
        case EmbedError::Kind::Error2: ++out.error2; break;
        case EmbedError::Kind::Error3: ++out.error3; break;
      }
    }
    if (w.outcome.merge_failed) ++out.merge_failures;
    out.protocol.moves.insert(out.protocol.moves.end(), w.moves.begin(), w.moves.end());
    out.squares.push_back(w.outcome);
    w.moves = {};
  }
  return out;
}

WeightState grid_funnel(const GeometricGraph& g) {
  std::vector<VertexId> all(g.vertex_count());
  for (VertexId v = 0; v < all.size(); ++v) all[v] = v;
  std::vector<Move> moves;
  funnel_cells(g, all, {0.0, 0.0}, g.side(), moves);
  WeightState state(g);
  for (const Move& m : moves) state.apply(m);
  return state;
}

Protocol greedy_upper(const GeometricGraph& g) {
  WeightState state = grid_funnel(g);
  greedy_complete(state);
  return Protocol{state.trace(), std::nullopt};
}

}  // namespace acquire
