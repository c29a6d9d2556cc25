#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "acquire/geometric_graph.hpp"

namespace acquire {

enum class PlanErrorKind { RadiusTooSmall, PlaneTooSmall, BadConstant };

std::string to_string(PlanErrorKind k);

class PlanError : public std::invalid_argument {
 public:
  PlanError(PlanErrorKind kind, const std::string& detail);
  PlanErrorKind kind() const { return kind_; }

 private:
  PlanErrorKind kind_;
};

enum class SquareStatus { Unclassified, Good, Bad };

struct BadReason {
  enum class Kind {
    SmallSquareTooSparse,
    SmallSquareTooDense,
    OnBorderOrDiagonal,   // property (a)
    SharedCoordinate,     // property (b)
    CollinearWithCenter,  // property (c)
  };
  Kind kind;
  /// Small-square index for count failures, otherwise the offending vertex.
  std::size_t detail;
};

std::string to_string(BadReason::Kind k);

struct SquareClass {
  SquareStatus status = SquareStatus::Unclassified;
  std::size_t vertex_count = 0;
  std::vector<BadReason> reasons;
};

/// Two-level tessellation of [0, sqrt n]^2: k x k large squares of side
/// x r lg r, each cut into ell x ell small squares of side y r.
struct TessellationPlan {
  double n = 0;
  double r = 0;
  double c = 0;
  double eps = 0;
  double side = 0;
  std::size_t k = 0;
  double x = 0;
  std::size_t ell = 0;
  double y = 0;
  double large_side = 0;
  double small_side = 0;
  /// (yr)^2, the expected number of vertices per small square.
  double expected_small_count = 0;
  /// Bounds on the vertex count of one triangle of a good square.
  double z_lower = 0;
  double z_upper = 0;
  /// False when (yr)^2 < 1/eps^2: small squares are too sparse for the
  /// goodness band to hold with reasonable probability.
  bool goodness_feasible = false;

  // Filled by classify().
  std::vector<std::uint32_t> small_counts;  // row-major over (k ell)^2
  std::vector<SquareClass> squares;         // row-major over k^2
  std::vector<std::size_t> member_offsets;  // CSR over squares
  std::vector<VertexId> members;

  std::size_t square_count() const { return k * k; }
  std::size_t square_of(Point p) const;
  Point square_origin(std::size_t square) const;
  Point square_center(std::size_t square) const;
  std::span<const VertexId> square_members(std::size_t square) const {
    return {members.data() + member_offsets[square], members.data() + member_offsets[square + 1]};
  }
  std::size_t good_count() const;
};

/// ceil() that treats values within 1e-12 (relative) of an integer as that
/// integer, so exact-looking inputs are not pushed up by rounding noise.
double snapped_ceil(double v);

/// Derives k, x, ell, y for a plane of area n. Throws PlanError when r < 2,
/// c or eps lies outside (0, 1), or c r lg r > sqrt n.
TessellationPlan plan(double n, double r, double c, double eps);

/// Counts vertices per small square and labels every large square.
TessellationPlan classify(TessellationPlan p, const GeometricGraph& g);

/// Test instances with no sampling noise: every small square of `p` receives
/// round((y r)^2) independent uniform points, so each large square meets the
/// count condition for any eps above the rounding error. Sampler::Synthetic.
PointSet sample_points_stratified(const TessellationPlan& p, std::uint64_t seed);

enum class Triangle { Bottom, Top, Left, Right };
inline constexpr Triangle kTriangles[] = {Triangle::Bottom, Triangle::Top, Triangle::Left,
                                          Triangle::Right};

std::string to_string(Triangle t);

/// Coordinates relative to a triangle whose apex is the square centre:
/// t is the distance from the apex towards the base, s runs along the base.
struct LocalPoint {
  double s;
  double t;
};

LocalPoint to_local(Triangle tri, Point center, Point p);

/// The triangle of the square with centre `center` that contains p. Points on
/// a diagonal go to Bottom/Top.
Triangle triangle_of(Point center, Point p);

}  // namespace acquire
