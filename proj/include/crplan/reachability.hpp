#pragma once

#include <vector>

#include "crplan/road_index.hpp"

namespace crplan {

/// Convex set of (xi, v) states: longitudinal position along a lanelet and velocity.
struct PVSet {
  ConvexPolygon polygon;

  static PVSet point(double xi, double v) { return {ConvexPolygon::point({xi, v})}; }
  bool empty() const { return polygon.empty(); }
  double xi_min() const { return polygon.min_coord(0); }
  double xi_max() const { return polygon.max_coord(0); }
  double v_min() const { return polygon.min_coord(1); }
  double v_max() const { return polygon.max_coord(1); }
  bool contains(double xi, double v, double tol = 1e-9) const { return polygon.contains({xi, v}, tol); }
  PVSet shifted(double dxi) const { return {polygon.translated({dxi, 0.0})}; }
};

/// Double-integrator transition matrix and input direction for step dt.
Mat2 transition_matrix(double dt);
Vec2 input_direction(double dt);

/// One step of the double integrator with |a| <= a_max, clipped to v >= 0.
PVSet propagate(const PVSet& set, double a_max, double dt);

/// Keeps a_lo <= xi <= a_hi.
PVSet clip_xi(const PVSet& set, double lo, double hi);

PVSet prune_speed_limit(const PVSet& set, double limit);

/// Caps v so that v^2 * kappa_max <= a_max.
PVSet prune_friction(const PVSet& set, double kappa_max, double a_max);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Sorted union of the given intervals.
std::vector<Interval> merge_intervals(std::vector<Interval> in);

/**
 * Splits the set along xi into the parts outside the blocked intervals and
 * inside [lo, hi]. Pieces are returned in ascending xi order.
 */
std::vector<PVSet> split_free(const PVSet& set, const std::vector<Interval>& blocked, double lo, double hi);

/// Arc-length intervals of the lanelet occupied by obstacles at step k, each widened by inflation.
std::vector<Interval> blocked_intervals(const RoadIndex& road, LaneletId id, const std::vector<Obstacle>& obstacles,
                                        int k, double inflation);

/// Free-space constraint on one lanelet: obstacles inflated by half the ego length plus the margin.
std::vector<PVSet> constrain_free_space(const PVSet& set, const RoadIndex& road, LaneletId id,
                                        const std::vector<Obstacle>& obstacles, int k, double ego_length,
                                        double safety_margin);

}  // namespace crplan
