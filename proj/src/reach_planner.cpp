#include "crplan/reach_planner.hpp"

#include <sstream>

#include "crplan/drivability.hpp"

namespace crplan {

PlanResult plan_reach(const Scenario& sc, const VehicleParameters& p, const ReachConfig& cfg,
                      const Deadline& deadline) {
  const RoadIndex road(sc.network);
  CorridorParams cp;
  cp.safety_margin = cfg.safety_margin;
  cp.max_corridors = cfg.max_corridors;
  cp.lane_change_spawn_interval = cfg.lane_change_spawn_interval;
  const auto corridors = enumerate_corridors(sc, road, p, cp, deadline);

  const auto ranked = rank_corridors(corridors, road, SelectionParams{cfg.v_desired, cfg.c_lc, sc.dt});
  if (ranked.empty()) return {std::nullopt, "no corridor reaches the goal"};

  ReferenceParams rp = cfg.reference;
  rp.v_desired = cfg.v_desired;
  std::ostringstream log;
  int attempts = 0;
  // Corridors trackable at comfortable acceleration go first, each pass in rank order.
  for (const bool comfort_only : {true, false}) {
    rp.comfort_only = comfort_only;
    for (const DrivingCorridor* c : ranked) {
      if (attempts >= cfg.max_attempts) break;
      deadline.check();
      const auto ref = extract_reference(*c, road, sc, p, rp);
      if (!ref || ref->length() < 2) continue;
      ++attempts;
      const OcpSolution sol =
          solve_tracking_ocp(ref->trajectory, sc.problem.initial_state, p, cfg.ocp, {}, deadline);
      const FeasibilityReport rep = check_feasibility(sol.trajectory, sc, road, p);
      if (!rep.feasible()) {
        log << "corridor " << c->id << ": " << to_string(rep.first_violation->condition) << " violation at step "
            << rep.first_violation->step << "; ";
        continue;
      }
      if (!first_goal_step(sol.trajectory, sc)) {
        log << "corridor " << c->id << ": goal missed; ";
        continue;
      }
      return {sol.trajectory, "corridor " + std::to_string(c->id)};
    }
  }
  if (attempts == 0) log << "no reference could be extracted";
  return {std::nullopt, "no drivable trajectory: " + log.str()};
}

}  // namespace crplan
