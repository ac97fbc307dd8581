#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace crplan {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Polyline = std::vector<Vec2>;

/// Raised for malformed geometry (singular maps, degenerate paths, projection failures).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vertices closer than this are merged.
inline constexpr double kVertexMergeTol = 1e-9;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Left normal of a direction vector.
inline Vec2 left_normal(const Vec2& v) { return {-v.y(), v.x()}; }

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Halfplane n·p <= c.
struct Halfplane {
  Vec2 normal;
  double offset;
};

/**
 * Closed convex set in the plane stored as counter-clockwise vertices.
 *
 * Degenerate sets are allowed: one vertex is a point, two vertices a segment,
 * zero vertices the empty set. Collinear interior vertices are dropped on
 * construction.
 */
class ConvexPolygon {
 public:
  ConvexPolygon() = default;

  /// Convex hull of arbitrary points.
  static ConvexPolygon hull(std::span<const Vec2> points);
  static ConvexPolygon point(const Vec2& p) { return hull(std::array<Vec2, 1>{p}); }
  static ConvexPolygon box(double x_lo, double x_hi, double y_lo, double y_hi);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }

  double area() const;
  /// Closed membership test with absolute tolerance.
  bool contains(const Vec2& p, double tol = 1e-9) const;
  /// Halfplane description; degenerate sets get a thin slab of width tol.
  std::vector<Halfplane> halfplanes(double tol = 1e-9) const;

  /// Min/max of the given coordinate (0 = x, 1 = y). Requires non-empty.
  double min_coord(int axis) const;
  double max_coord(int axis) const;

  ConvexPolygon translated(const Vec2& t) const;

 private:
  std::vector<Vec2> vertices_;
};

/// Separating-axis test on closed sets; touching counts as intersecting.
bool polygons_intersect(const ConvexPolygon& a, const ConvexPolygon& b);

/// Image of a under p -> M p. Throws GeometryError if M is singular.
ConvexPolygon affine_transform(const ConvexPolygon& a, const Mat2& m);

/// a ⊕ {t·dir : t ∈ [-r, r]}.
ConvexPolygon minkowski_segment(const ConvexPolygon& a, const Vec2& dir, double r);

/// Keeps the part of a with n·p <= c.
ConvexPolygon clip(const ConvexPolygon& a, const Halfplane& h);

ConvexPolygon intersect(const ConvexPolygon& a, const ConvexPolygon& b);

/// Point in a simple (possibly non-convex) polygon, boundary included.
bool point_in_polygon(std::span<const Vec2> polygon, const Vec2& p, double tol = 1e-9);

/// Distance from p to segment [a, b].
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

/// True if segments [a, b] and [c, d] share a point.
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

/// Checks that a polyline has no intersections between non-adjacent segments.
bool is_simple_polyline(std::span<const Vec2> line);

/// Rectangle of given length (along heading) and width centered at center.
struct OrientedBox {
  Vec2 center{0.0, 0.0};
  double heading = 0.0;
  double length = 0.0;
  double width = 0.0;

  /// Corners in CCW order starting at rear-right.
  std::array<Vec2, 4> corners() const;
  ConvexPolygon polygon() const;
};

}  // namespace crplan
