#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acquire/graph.hpp"

namespace acquire {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

enum class Sampler { FixedN, Poisson, Synthetic };

std::string to_string(Sampler s);
std::optional<Sampler> sampler_from_string(std::string_view name);

/// Points in the square [0, side]^2, in generation order.
struct PointSet {
  double side = 0.0;
  std::vector<Point> points;
  std::optional<std::uint64_t> seed;
  Sampler sampler = Sampler::Synthetic;

  friend bool operator==(const PointSet&, const PointSet&) = default;
};

/// n i.i.d. uniform points on [0, sqrt(n)]^2; x then y per point.
PointSet sample_points_fixed_n(std::size_t n, std::uint64_t seed);
/// Poisson(mean) many uniform points on [0, sqrt(mean)]^2.
PointSet sample_points_poisson(double mean, std::uint64_t seed);

/// Uniform bucket grid over [0, side]^2. Points outside are clamped into the
/// border cells, so every point has exactly one cell.
class CellGrid {
 public:
  CellGrid() = default;
  CellGrid(std::span<const Point> points, double side, double cell_side);

  double cell_side() const { return cell_; }
  std::size_t cells_per_side() const { return dim_; }
  std::size_t cell_of(Point p) const { return row_of(p.y) * dim_ + col_of(p.x); }
  std::span<const VertexId> cell_members(std::size_t cell) const {
    return {members_.data() + offsets_[cell], members_.data() + offsets_[cell + 1]};
  }

  /// Calls fn(id) for every stored point within closed distance `radius` of p.
  template <typename Fn>
  void for_each_within(std::span<const Point> points, Point p, double radius, Fn&& fn) const {
    if (dim_ == 0) return;
    const double r2 = radius * radius;
    const std::size_t c0 = col_of(p.x - radius), c1 = col_of(p.x + radius);
    const std::size_t r0 = row_of(p.y - radius), r1 = row_of(p.y + radius);
    for (std::size_t row = r0; row <= r1; ++row) {
      for (std::size_t col = c0; col <= c1; ++col) {
        for (VertexId id : cell_members(row * dim_ + col)) {
          if (squared_distance(points[id], p) <= r2) fn(id);
        }
      }
    }
  }

  std::size_t count_within(std::span<const Point> points, Point p, double radius) const {
    std::size_t count = 0;
    for_each_within(points, p, radius, [&](VertexId) { ++count; });
    return count;
  }

 private:
  std::size_t col_of(double x) const { return clamp_index(x); }
  std::size_t row_of(double y) const { return clamp_index(y); }
  std::size_t clamp_index(double v) const {
    if (!(v > 0.0)) return 0;
    const double f = std::floor(v / cell_);
    if (f >= static_cast<double>(dim_ - 1)) return dim_ - 1;
    return static_cast<std::size_t>(f);
  }

  double cell_ = 1.0;
  std::size_t dim_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> members_;
};

enum class AdjacencyMode {
  /// Sorted neighbour lists are stored. Needed for fast repeated neighbour scans.
  Materialized,
  /// Only the cell grid is stored; neighbour queries scan nearby cells. Used for
  /// dense sweeps where the edge count would not fit in memory.
  GridOnly,
};

/// The radius-r geometric graph on a point set: u ~ v iff |u - v|^2 <= r^2.
/// Immutable once built.
class GeometricGraph final : public Graph {
 public:
  GeometricGraph() = default;
  static GeometricGraph build(PointSet pointset, double radius,
                              AdjacencyMode mode = AdjacencyMode::Materialized);

  const PointSet& pointset() const { return pointset_; }
  std::span<const Point> points() const { return pointset_.points; }
  Point point(VertexId v) const { return pointset_.points[v]; }
  double side() const { return pointset_.side; }
  double radius() const { return radius_; }
  double radius_squared() const { return radius_ * radius_; }
  const CellGrid& grid() const { return grid_; }
  bool has_adjacency() const { return !offsets_.empty(); }

  std::size_t vertex_count() const override { return pointset_.points.size(); }
  bool adjacent(VertexId u, VertexId v) const override;
  std::size_t degree(VertexId v) const override;
  void for_each_neighbor(VertexId v, const std::function<void(VertexId)>& fn) const override;

  /// Requires has_adjacency().
  std::span<const VertexId> neighbor_span(VertexId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t edge_count() const;

 private:
  PointSet pointset_;
  double radius_ = 0.0;
  CellGrid grid_;
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> targets_;
};

GeometricGraph sample_fixed_n(std::size_t n, double r, std::uint64_t seed,
                              AdjacencyMode mode = AdjacencyMode::Materialized);
GeometricGraph sample_poisson(double mean, double r, std::uint64_t seed,
                              AdjacencyMode mode = AdjacencyMode::Materialized);

}  // namespace acquire
