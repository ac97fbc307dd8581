#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "crplan/geometry.hpp"

namespace crplan {

/// Malformed or inconsistent input documents.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using LaneletId = int;

struct Lanelet {
  LaneletId id = 0;
  Polyline left_boundary;
  Polyline right_boundary;
  std::vector<LaneletId> successors;
  std::optional<LaneletId> adjacent_left;
  std::optional<LaneletId> adjacent_right;
  std::optional<double> speed_limit;
};

struct LaneletNetwork {
  std::map<LaneletId, Lanelet> lanelets;

  const Lanelet& at(LaneletId id) const;
  bool contains(LaneletId id) const { return lanelets.count(id) != 0; }
};

struct ObstacleState {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
  double v = 0.0;
};

struct Obstacle {
  int id = 0;
  double length = 0.0;
  double width = 0.0;
  /// states[k] is the prediction at time step k.
  std::vector<ObstacleState> states;

  /// State at step k; held at the last recorded state beyond the prediction.
  const ObstacleState& state_at(int k) const;
};

struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double delta = 0.0;
  double v = 0.0;
  double psi = 0.0;

  Vec2 position() const { return {x, y}; }
};

struct ControlInput {
  double v_delta = 0.0;
  double a = 0.0;
};

/// Goal region: a set of lanelets or a convex polygon.
struct GoalSpec {
  std::variant<std::vector<LaneletId>, Polyline> region;
  double v_lo = 0.0;
  double v_hi = 0.0;
  int t_lo = 0;
  int t_hi = 0;

  bool has_lanelets() const { return std::holds_alternative<std::vector<LaneletId>>(region); }
  const std::vector<LaneletId>& lanelet_ids() const { return std::get<std::vector<LaneletId>>(region); }
  const Polyline& polygon() const { return std::get<Polyline>(region); }
};

struct PlanningProblem {
  VehicleState initial_state;
  int initial_time = 0;
  GoalSpec goal;
};

struct Scenario {
  std::string id;
  double dt = 0.1;
  int horizon = 0;
  LaneletNetwork network;
  std::vector<Obstacle> obstacles;
  PlanningProblem problem;
};

/// Kinematic single-track parameters. Defaults describe a compact passenger car.
struct VehicleParameters {
  double wheelbase = 2.578;
  double length = 4.298;
  double width = 1.674;
  double a_max = 11.5;
  double v_max = 45.8;
  double v_switch = 7.32;
  double delta_max = 0.91;
  double v_delta_max = 0.4;
  /// Scale the positive acceleration limit by v_switch / v above v_switch.
  bool power_limit = true;

  /// Throws InputError when a field is nonpositive or delta_max >= pi/2.
  void validate() const;
};

/// Vertex-wise midpoints of the two boundaries.
Polyline lane_center(const Lanelet& l);

/// Left boundary followed by the reversed right boundary.
Polyline lanelet_polygon(const Lanelet& l);

OrientedBox obstacle_occupancy(const Obstacle& o, int k);

OrientedBox ego_occupancy(const VehicleState& s, const VehicleParameters& p);

/// Reference point inside the goal region (closed), v and k inside their intervals.
bool goal_reached(const VehicleState& s, int k, const GoalSpec& g, const LaneletNetwork& net);

/// Checks every structural invariant; throws InputError naming the first violation.
void validate_scenario(const Scenario& sc);

}  // namespace crplan
