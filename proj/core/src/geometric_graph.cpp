#include "acquire/geometric_graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "acquire/rng.hpp"

namespace acquire {

std::string to_string(Sampler s) {
  switch (s) {
    case Sampler::FixedN: return "fixed";
    case Sampler::Poisson: return "poisson";
    case Sampler::Synthetic: return "synthetic";
  }
  return "synthetic";
}

std::optional<Sampler> sampler_from_string(std::string_view name) {
  if (name == "fixed") return Sampler::FixedN;
  if (name == "poisson") return Sampler::Poisson;
  if (name == "synthetic") return Sampler::Synthetic;
  return std::nullopt;
}

namespace {

void fill_uniform(PointSet& ps, std::size_t count, Rng& rng) {
  ps.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = rng.uniform01() * ps.side;
    const double y = rng.uniform01() * ps.side;
    ps.points.push_back({x, y});
  }
}

}  // namespace

PointSet sample_points_fixed_n(std::size_t n, std::uint64_t seed) {
  PointSet ps;
  ps.side = std::sqrt(static_cast<double>(n));
  ps.seed = seed;
  ps.sampler = Sampler::FixedN;
  Rng rng(seed);
  fill_uniform(ps, n, rng);
  return ps;
}

PointSet sample_points_poisson(double mean, std::uint64_t seed) {
  if (!(mean > 0.0)) throw std::invalid_argument("sample_poisson: mean must be positive");
  PointSet ps;
  ps.side = std::sqrt(mean);
  ps.seed = seed;
  ps.sampler = Sampler::Poisson;
  Rng rng(seed);
  const std::uint64_t count = rng.poisson(mean);
  fill_uniform(ps, count, rng);
  return ps;
}

CellGrid::CellGrid(std::span<const Point> points, double side, double cell_side) {
  if (!(cell_side > 0.0)) throw std::invalid_argument("CellGrid: cell side must be positive");
  cell_ = cell_side;
  const double per_side = side > 0.0 ? std::ceil(side / cell_side) : 1.0;
  dim_ = std::max<std::size_t>(1, static_cast<std::size_t>(per_side));
  offsets_.assign(dim_ * dim_ + 1, 0);
  std::vector<std::size_t> cell_ids(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    cell_ids[i] = cell_of(points[i]);
    ++offsets_[cell_ids[i] + 1];
  }
  for (std::size_t c = 0; c < dim_ * dim_; ++c) offsets_[c + 1] += offsets_[c];
  members_.resize(points.size());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    members_[cursor[cell_ids[i]]++] = static_cast<VertexId>(i);
  }
}

GeometricGraph GeometricGraph::build(PointSet pointset, double radius, AdjacencyMode mode) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("GeometricGraph: radius must be positive and finite");
  }
  if (pointset.points.size() > std::size_t(UINT32_MAX)) {
    throw std::length_error("GeometricGraph: too many points");
  }
  GeometricGraph g;
  g.pointset_ = std::move(pointset);
  g.radius_ = radius;

  // Cell side >= r keeps every neighbour inside the 3x3 block; the cap on
  // cells per side keeps memory linear in n for tiny radii.
  const std::size_t n = g.pointset_.points.size();
  const double side = g.pointset_.side;
  const double max_cells = std::ceil(std::sqrt(static_cast<double>(std::max<std::size_t>(n, 1)))) + 1;
  double cell = radius;
  if (side > 0.0 && side / cell > max_cells) cell = side / max_cells;
  g.grid_ = CellGrid(g.pointset_.points, side, cell);

  if (mode == AdjacencyMode::Materialized) {
    g.offsets_.assign(n + 1, 0);
    std::vector<VertexId> scratch;
    for (VertexId v = 0; v < n; ++v) {
      scratch.clear();
      g.grid_.for_each_within(g.points(), g.point(v), radius, [&](VertexId u) {
        if (u != v) scratch.push_back(u);
      });
      std::sort(scratch.begin(), scratch.end());
      g.targets_.insert(g.targets_.end(), scratch.begin(), scratch.end());
      g.offsets_[v + 1] = g.targets_.size();
    }
    g.targets_.shrink_to_fit();
  }
  return g;
}

bool GeometricGraph::adjacent(VertexId u, VertexId v) const {
  if (u == v || u >= vertex_count() || v >= vertex_count()) return false;
  return squared_distance(point(u), point(v)) <= radius_squared();
}

std::size_t GeometricGraph::degree(VertexId v) const {
  if (has_adjacency()) return offsets_[v + 1] - offsets_[v];
  return grid_.count_within(points(), point(v), radius_) - 1;
}

void GeometricGraph::for_each_neighbor(VertexId v,
                                       const std::function<void(VertexId)>& fn) const {
  if (has_adjacency()) {
    for (VertexId u : neighbor_span(v)) fn(u);
    return;
  }
  grid_.for_each_within(points(), point(v), radius_, [&](VertexId u) {
    if (u != v) fn(u);
  });
}

std::size_t GeometricGraph::edge_count() const {
  if (has_adjacency()) return targets_.size() / 2;
  std::size_t twice = 0;
  for (VertexId v = 0; v < vertex_count(); ++v) twice += degree(v);
  return twice / 2;
}

GeometricGraph sample_fixed_n(std::size_t n, double r, std::uint64_t seed, AdjacencyMode mode) {
  return GeometricGraph::build(sample_points_fixed_n(n, seed), r, mode);
}

GeometricGraph sample_poisson(double mean, double r, std::uint64_t seed, AdjacencyMode mode) {
  return GeometricGraph::build(sample_points_poisson(mean, seed), r, mode);
}

}  // namespace acquire
