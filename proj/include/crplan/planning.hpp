#pragma once

#include <optional>
#include <string>

#include "crplan/vehicle.hpp"

namespace crplan {

/// Planner output: a trajectory on success, otherwise a reason. Nothing is fabricated on failure.
struct PlanResult {
  std::optional<Trajectory> trajectory;
  std::string message;

  bool ok() const { return trajectory.has_value(); }
};

/// First k with goal_reached(states[k], initial_time + k), or nullopt.
std::optional<std::size_t> first_goal_step(const Trajectory& traj, const Scenario& sc);

}  // namespace crplan
