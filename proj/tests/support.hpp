#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "crplan/scenario.hpp"

namespace crplan::test {

/// Straight lanelet along x from x0 to x1, centered at y = center.
inline Lanelet straight_lanelet(LaneletId id, double x0, double x1, double center, double width = 3.5,
                                int vertices = 11) {
  Lanelet l;
  l.id = id;
  for (int i = 0; i < vertices; ++i) {
    const double x = x0 + (x1 - x0) * i / (vertices - 1);
    l.left_boundary.push_back({x, center + 0.5 * width});
    l.right_boundary.push_back({x, center - 0.5 * width});
  }
  return l;
}

/// Lanelet along a CCW circular arc of center-line radius r around the origin.
inline Lanelet arc_lanelet(LaneletId id, double r, double a0, double a1, double width = 3.5, int vertices = 61) {
  Lanelet l;
  l.id = id;
  for (int i = 0; i < vertices; ++i) {
    const double a = a0 + (a1 - a0) * i / (vertices - 1);
    const Vec2 dir{std::cos(a), std::sin(a)};
    l.left_boundary.push_back(dir * (r - 0.5 * width));
    l.right_boundary.push_back(dir * (r + 0.5 * width));
  }
  return l;
}

inline Obstacle static_obstacle(int id, double x, double y, double length = 4.5, double width = 1.8,
                                double psi = 0.0) {
  return Obstacle{id, length, width, {{x, y, psi, 0.0}}};
}

inline Obstacle moving_obstacle(int id, double x0, double y, double v, int steps, double dt, double length = 4.5,
                                double width = 1.8) {
  Obstacle o{id, length, width, {}};
  for (int k = 0; k <= steps; ++k) o.states.push_back({x0 + v * k * dt, y, 0.0, v});
  return o;
}

inline GoalSpec lanelet_goal(std::vector<LaneletId> ids, double v_lo = 0.0, double v_hi = 40.0, int t_lo = 0,
                             int t_hi = 100) {
  GoalSpec g;
  g.region = std::move(ids);
  g.v_lo = v_lo;
  g.v_hi = v_hi;
  g.t_lo = t_lo;
  g.t_hi = t_hi;
  return g;
}

inline GoalSpec box_goal(double x0, double x1, double y0, double y1, double v_lo = 0.0, double v_hi = 40.0,
                         int t_lo = 0, int t_hi = 100) {
  GoalSpec g;
  g.region = Polyline{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  g.v_lo = v_lo;
  g.v_hi = v_hi;
  g.t_lo = t_lo;
  g.t_hi = t_hi;
  return g;
}

/// One straight 200 m lane; ego at x = 10 driving at v along +x.
inline Scenario single_lane_scenario(double v = 10.0, int horizon = 100) {
  Scenario sc;
  sc.id = "single_lane";
  sc.dt = 0.1;
  sc.horizon = horizon;
  sc.network.lanelets[1] = straight_lanelet(1, 0.0, 200.0, 0.0);
  sc.problem.initial_state = VehicleState{10.0, 0.0, 0.0, v, 0.0};
  sc.problem.goal = box_goal(60.0, 120.0, -1.75, 1.75, 0.0, 40.0, 0, horizon);
  return sc;
}

/// Two parallel 200 m lanes, 1 on the right (y = 0) and 2 on the left (y = 3.5).
inline Scenario two_lane_scenario(double v = 10.0, int horizon = 100) {
  Scenario sc = single_lane_scenario(v, horizon);
  sc.id = "two_lanes";
  sc.network.lanelets[2] = straight_lanelet(2, 0.0, 200.0, 3.5);
  sc.network.lanelets[1].adjacent_left = 2;
  sc.network.lanelets[2].adjacent_right = 1;
  return sc;
}

}  // namespace crplan::test
