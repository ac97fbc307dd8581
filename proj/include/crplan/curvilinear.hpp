#pragma once

#include <optional>
#include <span>
#include <vector>

#include "crplan/geometry.hpp"

namespace crplan {

/// Arc length and signed lateral offset (positive left of the travel direction).
struct FrenetPoint {
  double s = 0.0;
  double d = 0.0;
};

/**
 * Curvilinear coordinate frame over a reference polyline.
 *
 * Each vertex carries a miter normal whose projection onto the normals of both
 * adjacent segments is one. Inside a segment the normal is interpolated
 * linearly between the two vertex miters, so a point at offset d lies exactly
 * on the segment's parallel line at distance d. The map is continuous across
 * vertices and both directions are closed-form.
 *
 * The map is injective where |d·κ| < 1; queries outside that band throw.
 */
class CurvilinearFrame {
 public:
  explicit CurvilinearFrame(Polyline path);

  double length() const { return arc_.back(); }
  const Polyline& reference() const { return path_; }
  std::span<const double> arc_lengths() const { return arc_; }
  /// Signed curvature per vertex (positive for left turns).
  std::span<const double> curvatures() const { return curvature_; }
  std::size_t num_segments() const { return tangent_.size(); }
  const Vec2& tangent(std::size_t segment) const { return tangent_[segment]; }
  Vec2 normal(std::size_t segment) const { return left_normal(tangent_[segment]); }

  /// Closest-projection coordinates. Throws GeometryError outside the domain or on ambiguity.
  FrenetPoint to_curvilinear(const Vec2& p) const;
  std::optional<FrenetPoint> try_to_curvilinear(const Vec2& p) const;
  /// Nearest-segment projection with s clamped to [0, length]; never throws.
  FrenetPoint project_clamped(const Vec2& p) const;

  /// Throws GeometryError if s is outside [0, length] or |d·κ| >= 1 at s.
  Vec2 to_cartesian(double s, double d) const;

  /// Smoothly interpolated reference heading, curvature and curvature rate.
  double heading_at(double s) const;
  double curvature_at(double s) const;
  double curvature_rate_at(double s) const;
  double max_abs_curvature() const;

  std::size_t segment_at(double s) const;

 private:
  struct Candidate {
    std::size_t segment;
    double along;
    double d;
  };
  std::optional<Candidate> solve_in_segment(std::size_t i, const Vec2& p) const;
  enum class Failure { kNone, kOutOfDomain, kAmbiguous };
  std::optional<FrenetPoint> locate(const Vec2& p, Failure& why) const;

  Polyline path_;
  std::vector<double> arc_;
  std::vector<Vec2> tangent_;
  std::vector<double> seg_len_;
  std::vector<Vec2> miter_;
  std::vector<double> curvature_;
  std::vector<double> vertex_heading_;
};

}  // namespace crplan
