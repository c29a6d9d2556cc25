#include "acquire/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "acquire/rng.hpp"

namespace acquire {

namespace {

std::size_t square_index_1d(double v, double square, std::size_t m) {
  if (!(v > 0.0)) return 0;
  const double f = std::floor(v / square);
  if (f >= static_cast<double>(m - 1)) return m - 1;
  return static_cast<std::size_t>(f);
}

}  // namespace

DangerousCertificate dangerous_squares(const GeometricGraph& g) {
  DangerousCertificate cert;
  const double r = g.radius();
  cert.r = r;
  if (!(r >= 2.0)) {
    cert.reason = "r < 2";
    return cert;
  }
  const double rlgr = r * std::log2(r);
  const double side = g.side();
  cert.squares_per_side = static_cast<std::size_t>(std::floor(side / (20.0 * rlgr)));
  if (cert.squares_per_side == 0) {
    cert.reason = "plane narrower than 20 r lg r";
    return cert;
  }
  cert.applicable = true;
  const std::size_t m = cert.squares_per_side;
  cert.square_side = side / static_cast<double>(m);
  cert.threshold = 1200.0 * rlgr * rlgr;
  const double steps = std::floor(4.0 * std::log2(r));
  cert.border_margin = cert.square_side / 2.0 - 1.0;
  cert.required_margin = 9.0 * rlgr;
  cert.path_reach = (steps + 1.0) * r;
  cert.acquired_weight = std::exp2(steps);
  cert.conditional = cert.border_margin < cert.required_margin ||
                     cert.path_reach > cert.border_margin ||
                     cert.acquired_weight <= cert.threshold;

  std::vector<std::size_t> totals(m * m, 0);
  for (const Point& p : g.points()) {
    ++totals[square_index_1d(p.y, cert.square_side, m) * m +
             square_index_1d(p.x, cert.square_side, m)];
  }
  for (std::size_t sq = 0; sq < m * m; ++sq) {
    if (static_cast<double>(totals[sq]) >= cert.threshold) continue;
    const Point centre{(static_cast<double>(sq % m) + 0.5) * cert.square_side,
                       (static_cast<double>(sq / m) + 0.5) * cert.square_side};
    const std::size_t inner = g.grid().count_within(g.points(), centre, 1.0);
    if (inner >= 1) cert.witness.push_back({sq, inner, totals[sq]});
  }
  cert.value = cert.witness.size();
  return cert;
}

std::string verify_dangerous(const GeometricGraph& g, const DangerousCertificate& cert) {
  if (!cert.applicable) return cert.value == 0 ? "" : "inapplicable certificate with value";
  const std::size_t m = cert.squares_per_side;
  const double s = cert.square_side;
  std::vector<std::size_t> totals(m * m, 0), inner(m * m, 0);
  for (const Point& p : g.points()) {
    const auto col = std::min<std::size_t>(m - 1, static_cast<std::size_t>(std::max(0.0, p.x / s)));
    const auto row = std::min<std::size_t>(m - 1, static_cast<std::size_t>(std::max(0.0, p.y / s)));
    const std::size_t sq = row * m + col;
    ++totals[sq];
    const double dx = p.x - (static_cast<double>(col) + 0.5) * s;
    const double dy = p.y - (static_cast<double>(row) + 0.5) * s;
    if (dx * dx + dy * dy <= 1.0) ++inner[sq];
  }
  std::size_t expected = 0;
  std::size_t w = 0;
  for (std::size_t sq = 0; sq < m * m; ++sq) {
    if (inner[sq] == 0 || static_cast<double>(totals[sq]) >= cert.threshold) continue;
    ++expected;
    if (w >= cert.witness.size() || cert.witness[w].index != sq) {
      return "square " + std::to_string(sq) + " is dangerous but missing from the witness";
    }
    if (cert.witness[w].total_count != totals[sq] || cert.witness[w].center_count != inner[sq]) {
      return "witness counts for square " + std::to_string(sq) + " do not match a recount";
    }
    ++w;
  }
  if (w != cert.witness.size()) return "witness lists a square that is not dangerous";
  if (expected != cert.value) return "value does not match the number of dangerous squares";
  return "";
}

std::string to_string(BallMode m) { return m == BallMode::Exact ? "exact" : "cellbound"; }

std::optional<BallMode> ball_mode_from_string(std::string_view s) {
  if (s == "exact") return BallMode::Exact;
  if (s == "cellbound") return BallMode::CellBound;
  return std::nullopt;
}

std::size_t value_from_caps(std::vector<Weight> caps, std::size_t n) {
  if (n == 0) return 0;
  std::sort(caps.begin(), caps.end(), std::greater<>());
  Weight sum = 0;
  for (std::size_t k = 0; k < caps.size(); ++k) {
    sum += caps[k];
    if (sum >= n) return k + 1;
  }
  return caps.size();
}

namespace {

// First excluded weight over levels L = 1, 2, ... given count(L).
BallCap cap_from_counts(Weight budget, std::size_t n,
                        const std::function<std::size_t(std::uint32_t)>& count) {
  BallCap out{static_cast<Weight>(n), 0, 0, false};
  for (std::uint32_t level = 1; level < 63; ++level) {
    const Weight lo = (Weight{1} << (level - 1)) + 1;
    const Weight hi = Weight{1} << level;
    if (lo > budget || lo > n) break;
    const std::size_t c = count(level);
    const Weight first = std::max<Weight>(lo, static_cast<Weight>(c) + 1);
    if (first <= hi) {
      out = {first - 1, level, c, false};
      break;
    }
  }
  return out;
}

void apply_degree_cap(BallCap& cap, std::size_t degree) {
  if (degree < 63 && (Weight{1} << degree) < cap.cap) {
    cap.cap = Weight{1} << degree;
    cap.degree_limited = true;
  }
}

// Per-cell upper bounds on Euclidean ball counts via row prefix sums.
class CellCounter {
 public:
  CellCounter(std::span<const Point> pts, double side, double cell)
      : cell_(cell), dim_(std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(side / cell)))) {
    prefix_.assign(dim_ * (dim_ + 1), 0);
    for (const Point& p : pts) ++prefix_[row_of(p.y) * (dim_ + 1) + col_of(p.x) + 1];
    for (std::size_t row = 0; row < dim_; ++row) {
      auto* base = prefix_.data() + row * (dim_ + 1);
      for (std::size_t c = 1; c <= dim_; ++c) base[c] += base[c - 1];
    }
  }

  std::size_t cell_of(Point p) const { return row_of(p.y) * dim_ + col_of(p.x); }

  /// Upper bound on the points within `radius` of any point of cell `id`.
  std::size_t bound(std::size_t id, double radius) const {
    const double cx = (static_cast<double>(id % dim_) + 0.5) * cell_;
    const double cy = (static_cast<double>(id / dim_) + 0.5) * cell_;
    const double reach = radius + cell_ * std::sqrt(0.5);
    std::size_t total = 0;
    const std::size_t r0 = row_of(cy - reach), r1 = row_of(cy + reach);
    for (std::size_t row = r0; row <= r1; ++row) {
      const double y0 = static_cast<double>(row) * cell_, y1 = y0 + cell_;
      const double dy = cy < y0 ? y0 - cy : (cy > y1 ? cy - y1 : 0.0);
      if (dy > reach) continue;
      const double half = std::sqrt(reach * reach - dy * dy);
      const std::size_t c0 = col_of(cx - half), c1 = col_of(cx + half);
      const auto* base = prefix_.data() + row * (dim_ + 1);
      total += base[c1 + 1] - base[c0];
    }
    return total;
  }

 private:
  std::size_t clamp(double v) const {
    if (!(v > 0.0)) return 0;
    const double f = std::floor(v / cell_);
    if (f >= static_cast<double>(dim_ - 1)) return dim_ - 1;
    return static_cast<std::size_t>(f);
  }
  std::size_t col_of(double x) const { return clamp(x); }
  std::size_t row_of(double y) const { return clamp(y); }

  double cell_;
  std::size_t dim_;
  std::vector<std::size_t> prefix_;
};

}  // namespace

BallCertificate ball_counting_cap(const Graph& g, Weight budget) {
  BallCertificate cert;
  cert.budget = budget;
  const std::size_t n = g.vertex_count();
  cert.caps.reserve(n);
  for (VertexId v = 0; v < n; ++v) {
    const auto dist = bfs_distances(g, v);
    BallCap cap = cap_from_counts(budget, n, [&](std::uint32_t level) {
      return static_cast<std::size_t>(std::count_if(
          dist.begin(), dist.end(), [&](std::size_t d) { return d <= level; }));
    });
    apply_degree_cap(cap, g.degree(v));
    cert.caps.push_back(cap);
  }
  std::vector<Weight> caps;
  for (const auto& c : cert.caps) caps.push_back(c.cap);
  cert.value = value_from_caps(std::move(caps), n);
  return cert;
}

BallCertificate ball_counting_cap(const GeometricGraph& g, Weight budget, BallMode mode) {
  BallCertificate cert;
  cert.budget = budget;
  cert.mode = mode;
  cert.geometric = true;
  const std::size_t n = g.vertex_count();
  const auto pts = g.points();
  const double r = g.radius();
  cert.caps.reserve(n);
  if (mode == BallMode::Exact) {
    const CellGrid grid(pts, g.side(), std::max(r, g.side() / 2048.0));
    for (VertexId v = 0; v < n; ++v) {
      BallCap cap = cap_from_counts(budget, n, [&](std::uint32_t level) {
        return grid.count_within(pts, pts[v], level * r);
      });
      apply_degree_cap(cap, g.degree(v));
      cert.caps.push_back(cap);
    }
  } else {
    const CellCounter counter(pts, g.side(), r / 2.0);
    std::vector<std::size_t> cell(n);
    std::vector<std::size_t> order(n);
    for (VertexId v = 0; v < n; ++v) cell[v] = counter.cell_of(pts[v]);
    // Vertices of one cell share a bound; compute it once per cell.
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return cell[a] != cell[b] ? cell[a] < cell[b] : a < b;
    });
    cert.caps.assign(n, BallCap{});
    for (std::size_t lo = 0; lo < n;) {
      std::size_t hi = lo;
      while (hi < n && cell[order[hi]] == cell[order[lo]]) ++hi;
      const BallCap cap = cap_from_counts(budget, n, [&](std::uint32_t level) {
        return counter.bound(cell[order[lo]], level * r);
      });
      for (std::size_t i = lo; i < hi; ++i) {
        BallCap own = cap;
        if (g.has_adjacency()) apply_degree_cap(own, g.degree(static_cast<VertexId>(order[i])));
        cert.caps[order[i]] = own;
      }
      lo = hi;
    }
  }
  std::vector<Weight> caps;
  caps.reserve(n);
  for (const auto& c : cert.caps) caps.push_back(c.cap);
  cert.value = value_from_caps(std::move(caps), n);
  return cert;
}

std::string verify_ball(const GeometricGraph& g, const BallCertificate& cert, std::size_t sample,
                        std::uint64_t seed) {
  const std::size_t n = g.vertex_count();
  if (cert.caps.size() != n) return "witness has the wrong number of caps";
  const auto pts = g.points();
  const double r = g.radius();
  std::vector<VertexId> chosen;
  if (sample >= n) {
    chosen.resize(n);
    std::iota(chosen.begin(), chosen.end(), 0);
  } else {
    Rng rng(seed);
    for (std::size_t i = 0; i < sample; ++i) chosen.push_back(static_cast<VertexId>(rng.below(n)));
  }
  for (VertexId v : chosen) {
    // Brute-force recomputation of the cap.
    Weight brute = static_cast<Weight>(n);
    for (std::uint32_t level = 1; level < 63; ++level) {
      const Weight lo = (Weight{1} << (level - 1)) + 1;
      if (lo > cert.budget || lo > n) break;
      const double rad2 = (level * r) * (level * r);
      std::size_t c = 0;
      for (const Point& p : pts) c += squared_distance(p, pts[v]) <= rad2 ? 1 : 0;
      const Weight first = std::max<Weight>(lo, static_cast<Weight>(c) + 1);
      if (first <= (Weight{1} << level)) {
        brute = first - 1;
        break;
      }
    }
    if (cert.caps[v].degree_limited) {
      const std::size_t deg = g.degree(v);
      if (deg < 63) brute = std::min(brute, Weight{1} << deg);
    }
    const Weight recorded = cert.caps[v].cap;
    if (cert.mode == BallMode::Exact ? brute != recorded : brute > recorded) {
      return "cap of vertex " + std::to_string(v) + " is " + std::to_string(recorded) +
             " but a recount gives " + std::to_string(brute);
    }
  }
  // Re-derive the value with a plain running sum.
  std::vector<Weight> caps;
  for (const auto& c : cert.caps) caps.push_back(c.cap);
  std::sort(caps.begin(), caps.end());
  Weight sum = 0;
  std::size_t k = 0;
  while (sum < n && k < caps.size()) sum += caps[caps.size() - 1 - k++];
  if (k != cert.value) return "value does not match the caps";
  return "";
}

}  // namespace acquire
