#include "acquire/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "acquire/rng.hpp"

namespace acquire {

std::string to_string(PlanErrorKind k) {
  switch (k) {
    case PlanErrorKind::RadiusTooSmall: return "RadiusTooSmall";
    case PlanErrorKind::PlaneTooSmall: return "PlaneTooSmall";
    case PlanErrorKind::BadConstant: return "BadConstant";
  }
  return "Unknown";
}

PlanError::PlanError(PlanErrorKind kind, const std::string& detail)
    : std::invalid_argument(to_string(kind) + ": " + detail), kind_(kind) {}

std::string to_string(BadReason::Kind k) {
  switch (k) {
    case BadReason::Kind::SmallSquareTooSparse: return "SmallSquareTooSparse";
    case BadReason::Kind::SmallSquareTooDense: return "SmallSquareTooDense";
    case BadReason::Kind::OnBorderOrDiagonal: return "OnBorderOrDiagonal";
    case BadReason::Kind::SharedCoordinate: return "SharedCoordinate";
    case BadReason::Kind::CollinearWithCenter: return "CollinearWithCenter";
  }
  return "Unknown";
}

std::string to_string(Triangle t) {
  switch (t) {
    case Triangle::Bottom: return "bottom";
    case Triangle::Top: return "top";
    case Triangle::Left: return "left";
    case Triangle::Right: return "right";
  }
  return "unknown";
}

double snapped_ceil(double v) {
  const double nearest = std::round(v);
  if (std::abs(v - nearest) <= 1e-12 * std::max(1.0, std::abs(v))) return nearest;
  return std::ceil(v);
}

TessellationPlan plan(double n, double r, double c, double eps) {
  if (!(c > 0.0 && c < 1.0)) throw PlanError(PlanErrorKind::BadConstant, "c must lie in (0, 1)");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw PlanError(PlanErrorKind::BadConstant, "eps must lie in (0, 1)");
  }
  if (!(r >= 2.0)) throw PlanError(PlanErrorKind::RadiusTooSmall, "r must be at least 2");
  if (!(n > 0.0)) throw PlanError(PlanErrorKind::PlaneTooSmall, "n must be positive");
  const double lg_r = std::log2(r);
  const double root_n = std::sqrt(n);
  const double unit = c * r * lg_r;
  if (unit > root_n * (1.0 + 1e-12)) {
    throw PlanError(PlanErrorKind::PlaneTooSmall, "c r lg r exceeds sqrt n");
  }
  TessellationPlan p;
  p.n = n;
  p.r = r;
  p.c = c;
  p.eps = eps;
  p.side = root_n;
  p.k = static_cast<std::size_t>(snapped_ceil(root_n / unit));
  p.x = root_n / (static_cast<double>(p.k) * r * lg_r);
  p.ell = 20 * static_cast<std::size_t>(snapped_ceil(p.x * lg_r / (20.0 * c)));
  p.y = p.x * lg_r / static_cast<double>(p.ell);
  p.large_side = root_n / static_cast<double>(p.k);
  p.small_side = p.y * r;
  p.expected_small_count = p.small_side * p.small_side;
  const double quarter = (p.x * r * lg_r) * (p.x * r * lg_r) / 4.0;
  p.z_lower = (1.0 - 2.0 * eps) * quarter;
  p.z_upper = (1.0 + 2.0 * eps) * quarter;
  p.goodness_feasible = p.expected_small_count >= 1.0 / (eps * eps);
  return p;
}

namespace {

std::size_t small_index_1d(double v, double small_side, std::size_t dim) {
  if (!(v > 0.0)) return 0;
  const double f = std::floor(v / small_side);
  if (f >= static_cast<double>(dim - 1)) return dim - 1;
  return static_cast<std::size_t>(f);
}

}  // namespace

std::size_t TessellationPlan::square_of(Point p) const {
  const std::size_t dim = k * ell;
  const std::size_t col = small_index_1d(p.x, small_side, dim) / ell;
  const std::size_t row = small_index_1d(p.y, small_side, dim) / ell;
  return row * k + col;
}

Point TessellationPlan::square_origin(std::size_t square) const {
  const std::size_t row = square / k, col = square % k;
  return {static_cast<double>(col) * large_side, static_cast<double>(row) * large_side};
}

Point TessellationPlan::square_center(std::size_t square) const {
  const Point o = square_origin(square);
  return {o.x + large_side / 2.0, o.y + large_side / 2.0};
}

std::size_t TessellationPlan::good_count() const {
  return static_cast<std::size_t>(std::count_if(squares.begin(), squares.end(), [](const auto& s) {
    return s.status == SquareStatus::Good;
  }));
}

namespace {

void check_general_position(const TessellationPlan& p, std::size_t square,
                            std::span<const Point> pts, std::span<const VertexId> ids,
                            std::vector<BadReason>& reasons) {
  const Point o = p.square_origin(square);
  const Point c = p.square_center(square);
  const double far_x = o.x + p.large_side, far_y = o.y + p.large_side;
  for (VertexId v : ids) {
    const Point q = pts[v];
    const double dx = q.x - c.x, dy = q.y - c.y;
    if (q.x == o.x || q.x == far_x || q.y == o.y || q.y == far_y ||
        std::abs(dx) == std::abs(dy)) {
      reasons.push_back({BadReason::Kind::OnBorderOrDiagonal, v});
      return;
    }
  }

  std::vector<double> coords;
  coords.reserve(ids.size());
  for (int axis = 0; axis < 2; ++axis) {
    coords.clear();
    for (VertexId v : ids) coords.push_back(axis == 0 ? pts[v].x : pts[v].y);
    std::sort(coords.begin(), coords.end());
    if (std::adjacent_find(coords.begin(), coords.end()) != coords.end()) {
      const double dup = *std::adjacent_find(coords.begin(), coords.end());
      for (VertexId v : ids) {
        if ((axis == 0 ? pts[v].x : pts[v].y) == dup) {
          reasons.push_back({BadReason::Kind::SharedCoordinate, v});
          return;
        }
      }
    }
  }

  // Directions folded onto a half-plane so that opposite rays coincide.
  struct Dir {
    double angle, dx, dy;
    VertexId v;
  };
  std::vector<Dir> dirs;
  dirs.reserve(ids.size());
  for (VertexId v : ids) {
    double dx = pts[v].x - c.x, dy = pts[v].y - c.y;
    if (dy < 0.0 || (dy == 0.0 && dx < 0.0)) {
      dx = -dx;
      dy = -dy;
    }
    dirs.push_back({std::atan2(dy, dx), dx, dy, v});
  }
  std::sort(dirs.begin(), dirs.end(), [](const Dir& a, const Dir& b) {
    return a.angle < b.angle || (a.angle == b.angle && a.v < b.v);
  });
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    for (std::size_t j = i + 1; j < dirs.size() && j <= i + 3; ++j) {
      if (dirs[i].dx * dirs[j].dy == dirs[j].dx * dirs[i].dy) {
        reasons.push_back({BadReason::Kind::CollinearWithCenter, dirs[j].v});
        return;
      }
    }
  }
}

}  // namespace

TessellationPlan classify(TessellationPlan p, const GeometricGraph& g) {
  const std::size_t dim = p.k * p.ell;
  const auto pts = g.points();
  p.small_counts.assign(dim * dim, 0);
  p.squares.assign(p.k * p.k, SquareClass{});
  std::vector<std::size_t> square_of_vertex(pts.size());
  for (VertexId v = 0; v < pts.size(); ++v) {
    const std::size_t col = small_index_1d(pts[v].x, p.small_side, dim);
    const std::size_t row = small_index_1d(pts[v].y, p.small_side, dim);
    ++p.small_counts[row * dim + col];
    square_of_vertex[v] = (row / p.ell) * p.k + col / p.ell;
  }

  p.member_offsets.assign(p.k * p.k + 1, 0);
  for (std::size_t s : square_of_vertex) ++p.member_offsets[s + 1];
  std::partial_sum(p.member_offsets.begin(), p.member_offsets.end(), p.member_offsets.begin());
  p.members.assign(pts.size(), 0);
  std::vector<std::size_t> cursor(p.member_offsets.begin(), p.member_offsets.end() - 1);
  for (VertexId v = 0; v < pts.size(); ++v) p.members[cursor[square_of_vertex[v]]++] = v;

  const double lo = (1.0 - p.eps) * p.expected_small_count;
  const double hi = (1.0 + p.eps) * p.expected_small_count;
  for (std::size_t sq = 0; sq < p.k * p.k; ++sq) {
    SquareClass& cls = p.squares[sq];
    cls.vertex_count = p.member_offsets[sq + 1] - p.member_offsets[sq];
    const std::size_t row0 = (sq / p.k) * p.ell, col0 = (sq % p.k) * p.ell;
    for (std::size_t i = 0; i < p.ell && cls.reasons.empty(); ++i) {
      for (std::size_t j = 0; j < p.ell; ++j) {
        const std::size_t idx = (row0 + i) * dim + col0 + j;
        const double count = p.small_counts[idx];
        if (count < lo) {
          cls.reasons.push_back({BadReason::Kind::SmallSquareTooSparse, idx});
          break;
        }
        if (count > hi) {
          cls.reasons.push_back({BadReason::Kind::SmallSquareTooDense, idx});
          break;
        }
      }
    }
    check_general_position(p, sq, pts, p.square_members(sq), cls.reasons);
    cls.status = cls.reasons.empty() ? SquareStatus::Good : SquareStatus::Bad;
  }
  return p;
}

LocalPoint to_local(Triangle tri, Point center, Point p) {
  const double dx = p.x - center.x, dy = p.y - center.y;
  switch (tri) {
    case Triangle::Bottom: return {dx, -dy};
    case Triangle::Top: return {-dx, dy};
    case Triangle::Right: return {dy, dx};
    case Triangle::Left: return {-dy, -dx};
  }
  return {dx, -dy};
}

Triangle triangle_of(Point center, Point p) {
  const double dx = p.x - center.x, dy = p.y - center.y;
  if (std::abs(dx) > std::abs(dy)) return dx > 0.0 ? Triangle::Right : Triangle::Left;
  return dy > 0.0 ? Triangle::Top : Triangle::Bottom;
}

PointSet sample_points_stratified(const TessellationPlan& p, std::uint64_t seed) {
  Rng rng(seed);
  const auto per_square = static_cast<std::size_t>(std::llround(p.expected_small_count));
  const std::size_t dim = p.k * p.ell;
  PointSet out;
  out.side = p.side;
  out.seed = seed;
  out.sampler = Sampler::Synthetic;
  out.points.reserve(dim * dim * per_square);
  for (std::size_t row = 0; row < dim; ++row) {
    for (std::size_t col = 0; col < dim; ++col) {
      const double x0 = static_cast<double>(col) * p.small_side;
      const double y0 = static_cast<double>(row) * p.small_side;
      for (std::size_t i = 0; i < per_square; ++i) {
        const double x = rng.uniform(x0, x0 + p.small_side);
        const double y = rng.uniform(y0, y0 + p.small_side);
        out.points.push_back({x, y});
      }
    }
  }
  return out;
}

}  // namespace acquire
