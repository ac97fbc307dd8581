#pragma once

#include <limits>
#include <vector>

#include "crplan/road_index.hpp"

namespace crplan {

struct IdmParams {
  /// Jam distance (m).
  double s0 = 2.0;
  /// Time headway (s).
  double time_headway = 1.5;
  double a = 1.5;
  double b = 2.0;
  double delta = 4.0;
};

/**
 * Intelligent Driver Model acceleration. gap is the bumper-to-bumper distance
 * to the leader (infinity for a free road), dv = v - v_leader. v0 <= 0 means the
 * vehicle wants to stand still.
 */
double idm_acceleration(double v, double v0, double gap, double dv, const IdmParams& p);

/// Gap at which a follower at speed v behind an equally fast leader has zero acceleration.
double idm_equilibrium_gap(double v, double v0, const IdmParams& p);

/// An obstacle driven by the IDM along the center line of its lanelet chain.
struct ReactiveAgent {
  int id = 0;
  double length = 0.0;
  double width = 0.0;
  CurvilinearFrame path;
  double s = 0.0;
  double v = 0.0;
  double v0 = 0.0;

  ObstacleState state() const;
};

/// Agents start at their scenario state at step k; the path follows first successors.
std::vector<ReactiveAgent> make_reactive_agents(const Scenario& sc, const RoadIndex& road, int k);

/**
 * Advances every agent by one step. The leader of an agent is the closest
 * agent or ego ahead within half a lane width of its path. Speeds are floored
 * at zero so no agent moves backward.
 */
void reactive_obstacles_step(std::vector<ReactiveAgent>& agents, const VehicleState& ego,
                             const VehicleParameters& ego_params, double dt, const IdmParams& p = {});

}  // namespace crplan
