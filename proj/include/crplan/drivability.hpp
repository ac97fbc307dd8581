#pragma once

#include <optional>
#include <string>

#include "crplan/curvilinear.hpp"
#include "crplan/road_index.hpp"
#include "crplan/vehicle.hpp"

namespace crplan {

enum class Condition { kCollision, kKinematic, kRoad };

std::string to_string(Condition c);

struct Violation {
  Condition condition;
  int step;
};

struct FeasibilityReport {
  bool collision_free = true;
  bool kinematically_feasible = true;
  bool road_compliant = true;
  /// Earliest violation over all failed conditions.
  std::optional<Violation> first_violation;

  bool feasible() const { return collision_free && kinematically_feasible && road_compliant; }
};

/// Combines partial reports; flags are independent, the earliest violation wins.
FeasibilityReport merge(const FeasibilityReport& a, const FeasibilityReport& b);

/// states[k] is checked against obstacle predictions at step start_step + k.
FeasibilityReport check_collision_free(const Trajectory& traj, const Scenario& sc, const VehicleParameters& p,
                                       int start_step = 0, double inflate = 0.0);

FeasibilityReport check_kinematic(const Trajectory& traj, const VehicleParameters& p, double tol = 1e-3);

enum class RoadCheckMode {
  /// Four box corners plus the center.
  kSamplePoints,
  /// Points every 0.1 m along the box outline.
  kDenseBoundary,
};

FeasibilityReport check_road_compliance(const Trajectory& traj, const RoadIndex& road, const VehicleParameters& p,
                                        RoadCheckMode mode = RoadCheckMode::kSamplePoints);

/// All three checks; states[k] is matched with obstacle step initial_time + k.
FeasibilityReport check_feasibility(const Trajectory& traj, const Scenario& sc, const RoadIndex& road,
                                    const VehicleParameters& p);

/// Weights of the four cost terms and the obstacle-distance decay.
struct CostWeights {
  double jerk = 0.01;
  double steering_rate = 22.0;
  double lane_center = 8.0;
  double distance = 5.0;
  double w_dist = 0.2;
};

struct CostBreakdown {
  double j_jerk = 0.0;
  double j_sr = 0.0;
  double j_dist = 0.0;
  double j_lc = 0.0;
  double total = 0.0;
};

/// Longitudinal jerk per acceleration sample: central differences inside, one-sided at the ends.
std::vector<double> longitudinal_jerk(std::span<const VehicleState> states, double dt);

/**
 * Rectangle-rule cost over the intervals [t_k, t_k+1) of the trajectory.
 *
 * frame is the ego's route frame; it decides which obstacles are in front.
 * Throws GeometryError naming the step when a state cannot be projected.
 */
CostBreakdown evaluate_cost(const Trajectory& traj, const Scenario& sc, const RoadIndex& road,
                            const CurvilinearFrame& frame, const VehicleParameters& p, const CostWeights& w = {});

}  // namespace crplan
