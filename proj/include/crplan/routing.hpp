#pragma once

#include <vector>

#include "crplan/curvilinear.hpp"
#include "crplan/road_index.hpp"

namespace crplan {

struct Route {
  std::vector<LaneletId> lanelets;
  /// lane_change[i] is true when lanelets[i + 1] is entered from lanelets[i] by a lane change.
  std::vector<bool> lane_change;
};

/// Lanelets whose center line enters the goal region; lanelets merely touching it if there are none.
std::vector<LaneletId> goal_lanelets(const RoadIndex& road, const GoalSpec& goal);

/**
 * Shortest route over successor and adjacency edges from start into a goal
 * lanelet, extended along successors past the goal by extension_length.
 * Lane changes cost lane_change_penalty metres. Falls back to the straight
 * successor chain if no goal lanelet is reachable.
 */
Route plan_route(const RoadIndex& road, LaneletId start, const GoalSpec& goal, double extension_length = 150.0,
                 double lane_change_penalty = 20.0);

/// Center line along the route; lane changes are blended over blend_length metres after start_s.
Polyline route_centerline(const RoadIndex& road, const Route& route, double start_s, double blend_length = 40.0);

/// Reference frame for a planning problem: route from the initial lanelet into the goal.
CurvilinearFrame build_reference_frame(const RoadIndex& road, const PlanningProblem& problem);

}  // namespace crplan
