#pragma once

#include <optional>
#include <vector>

#include "crplan/deadline.hpp"
#include "crplan/reachability.hpp"

namespace crplan {

/// One time step of a driving corridor.
struct CorridorCell {
  int step = 0;
  LaneletId lanelet = 0;
  /// Successor chain starting with lanelet; xi beyond a lanelet's length continues on the next one.
  std::vector<LaneletId> chain;
  /// Reachable free states in xi local to the first chain lanelet.
  PVSet set;
  /// Global xi = local xi + offset. Consecutive cells share the global axis.
  double offset = 0.0;
  /// Local xi range of the goal region covered by this cell, if the step is inside the goal time window.
  std::optional<Interval> goal_xi;
  /// Set when this cell was entered by a lane change from that lanelet.
  std::optional<LaneletId> changed_from;
};

struct DrivingCorridor {
  int id = 0;
  std::vector<CorridorCell> cells;
  int lane_change_count = 0;
  bool terminal_reaches_goal = false;

  /// Lanelets in visiting order with repeats removed.
  std::vector<LaneletId> lanelet_sequence() const;
};

struct CorridorParams {
  double safety_margin = 0.5;
  int max_corridors = 64;
  /// Minimum number of steps between two lane-change spawns of one branch into the same lanelet.
  int lane_change_spawn_interval = 10;
};

/// Goal-region extent along a lanelet's center line, in local xi. nullopt if the lanelet misses the goal.
std::optional<Interval> goal_interval_on(const RoadIndex& road, LaneletId id, const GoalSpec& goal);

/**
 * Breadth-first corridor enumeration from the initial state up to the last
 * goal time step. Branches follow simple lanelet paths; a branch that splits
 * around obstacles continues as one branch per piece. A corridor reaches the
 * goal when its terminal cell overlaps the goal region. Reachable speeds are
 * capped by the vehicle's full-throttle envelope. Corridor ids follow
 * creation order.
 */
std::vector<DrivingCorridor> enumerate_corridors(const Scenario& sc, const RoadIndex& road,
                                                 const VehicleParameters& p, const CorridorParams& params,
                                                 const Deadline& deadline = {});

struct SelectionParams {
  double v_desired = 13.0;
  double c_lc = 5.0;
  double dt = 0.1;
};

/// c_lc * lane changes + sum over cells of |v_mid - min(v_desired, speed limit)| * dt.
double corridor_cost(const DrivingCorridor& c, const RoadIndex& road, const SelectionParams& params);

/// Goal-reaching corridors by ascending cost, then fewer lane changes, then lower id.
std::vector<const DrivingCorridor*> rank_corridors(const std::vector<DrivingCorridor>& corridors,
                                                   const RoadIndex& road, const SelectionParams& params);

/// Best goal-reaching corridor. Throws std::invalid_argument if there is none.
const DrivingCorridor& select_corridor(const std::vector<DrivingCorridor>& corridors, const RoadIndex& road,
                                       const SelectionParams& params);

/// Sampled reference positions; points[k] belongs to time step k of the plan.
struct ReferenceTrajectory {
  double dt = 0.1;
  Polyline points;
};

struct ReferenceParams {
  double v_desired = 13.0;
  /// Acceleration bound used to shape the longitudinal profile; retried with the vehicle bound on failure.
  double a_comfort = 3.0;
  /// Skip the retry with the vehicle bound.
  bool comfort_only = false;
  double goal_xi_margin = 2.0;
  double goal_v_margin = 0.5;
  /// Lateral transition length of a lane change in steps.
  int lane_change_steps = 30;
  /// Steps over which an initial offset from the lane center decays.
  int initial_offset_steps = 20;
};

/// Longitudinal profile and Cartesian reference extracted from a corridor.
struct ReferencePlan {
  ReferenceTrajectory trajectory;
  /// Global xi and velocity per step.
  std::vector<double> xi;
  std::vector<double> v;
  /// Number of corridor cells used (terminal index + 1).
  std::size_t length() const { return xi.size(); }
};

/**
 * Greedy forward pass toward the desired velocity, clamped by backward
 * feasibility through the corridor cells. Ends at the first step whose state
 * lies in the goal box. nullopt if no goal step is reachable inside the corridor.
 */
std::optional<ReferencePlan> extract_reference(const DrivingCorridor& c, const RoadIndex& road,
                                               const Scenario& sc, const VehicleParameters& p,
                                               const ReferenceParams& params);

}  // namespace crplan
