#pragma once

#include "crplan/corridor.hpp"
#include "crplan/planning.hpp"
#include "crplan/tracking_ocp.hpp"

namespace crplan {

struct ReachConfig {
  double v_desired = 13.0;
  double c_lc = 5.0;
  double safety_margin = 0.5;
  int max_corridors = 64;
  int lane_change_spawn_interval = 10;
  /// Corridors tried in rank order before giving up.
  int max_attempts = 16;
  ReferenceParams reference;
  OcpSettings ocp;
};

/**
 * Enumerate corridors, rank them, extract a reference from the best one and
 * track it with the OCP. Falls through to the next-ranked corridor when the
 * tracked trajectory fails a drivability check or misses the goal.
 */
PlanResult plan_reach(const Scenario& sc, const VehicleParameters& p, const ReachConfig& cfg,
                      const Deadline& deadline = {});

}  // namespace crplan
