#include "crplan/planning.hpp"

namespace crplan {

std::optional<std::size_t> first_goal_step(const Trajectory& traj, const Scenario& sc) {
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    if (goal_reached(traj.states[k], sc.problem.initial_time + static_cast<int>(k), sc.problem.goal, sc.network)) {
      return k;
    }
  }
  return std::nullopt;
}

}  // namespace crplan
