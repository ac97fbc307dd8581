#include "crplan/drivability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crplan {

std::string to_string(Condition c) {
  switch (c) {
    case Condition::kCollision:
      return "collision";
    case Condition::kKinematic:
      return "kinematic";
    case Condition::kRoad:
      return "road";
  }
  return "unknown";
}

FeasibilityReport merge(const FeasibilityReport& a, const FeasibilityReport& b) {
  FeasibilityReport out;
  out.collision_free = a.collision_free && b.collision_free;
  out.kinematically_feasible = a.kinematically_feasible && b.kinematically_feasible;
  out.road_compliant = a.road_compliant && b.road_compliant;
  out.first_violation = a.first_violation;
  if (b.first_violation) {
    const auto key = [](const Violation& v) { return std::pair{v.step, static_cast<int>(v.condition)}; };
    if (!out.first_violation || key(*b.first_violation) < key(*out.first_violation)) out.first_violation = b.first_violation;
  }
  return out;
}

FeasibilityReport check_collision_free(const Trajectory& traj, const Scenario& sc, const VehicleParameters& p,
                                       int start_step, double inflate) {
  FeasibilityReport r;
  VehicleParameters inflated = p;
  inflated.length += 2.0 * inflate;
  inflated.width += 2.0 * inflate;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const ConvexPolygon ego = ego_occupancy(traj.states[k], inflated).polygon();
    const int step = start_step + static_cast<int>(k);
    for (const auto& o : sc.obstacles) {
      if (polygons_intersect(ego, obstacle_occupancy(o, step).polygon())) {
        r.collision_free = false;
        r.first_violation = Violation{Condition::kCollision, static_cast<int>(k)};
        return r;
      }
    }
  }
  return r;
}

FeasibilityReport check_kinematic(const Trajectory& traj, const VehicleParameters& p, double tol) {
  FeasibilityReport r;
  const auto rec = reconstruct_inputs(traj.states, traj.dt, p, tol);
  if (!rec.feasible) {
    r.kinematically_feasible = false;
    r.first_violation = Violation{Condition::kKinematic, *rec.first_violation};
  }
  return r;
}

namespace {

std::vector<Vec2> road_samples(const OrientedBox& box, RoadCheckMode mode) {
  const auto c = box.corners();
  std::vector<Vec2> pts(c.begin(), c.end());
  pts.push_back(box.center);
  if (mode == RoadCheckMode::kDenseBoundary) {
    for (std::size_t i = 0; i < 4; ++i) {
      const Vec2& a = c[i];
      const Vec2& b = c[(i + 1) % 4];
      const int n = std::max(1, static_cast<int>(std::ceil((b - a).norm() / 0.1)));
      for (int j = 1; j < n; ++j) pts.push_back(a + (b - a) * (static_cast<double>(j) / n));
    }
  }
  return pts;
}

}  // namespace

FeasibilityReport check_road_compliance(const Trajectory& traj, const RoadIndex& road, const VehicleParameters& p,
                                        RoadCheckMode mode) {
  FeasibilityReport r;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    for (const auto& pt : road_samples(ego_occupancy(traj.states[k], p), mode)) {
      if (!road.on_road(pt)) {
        r.road_compliant = false;
        r.first_violation = Violation{Condition::kRoad, static_cast<int>(k)};
        return r;
      }
    }
  }
  return r;
}

FeasibilityReport check_feasibility(const Trajectory& traj, const Scenario& sc, const RoadIndex& road,
                                    const VehicleParameters& p) {
  return merge(merge(check_collision_free(traj, sc, p, sc.problem.initial_time), check_kinematic(traj, p)),
               check_road_compliance(traj, road, p));
}

std::vector<double> longitudinal_jerk(std::span<const VehicleState> states, double dt) {
  std::vector<double> acc;
  for (std::size_t k = 0; k + 1 < states.size(); ++k) acc.push_back((states[k + 1].v - states[k].v) / dt);
  std::vector<double> jerk(acc.size(), 0.0);
  if (acc.size() < 2) return jerk;
  const std::size_t n = acc.size();
  jerk[0] = (acc[1] - acc[0]) / dt;
  jerk[n - 1] = (acc[n - 1] - acc[n - 2]) / dt;
  for (std::size_t k = 1; k + 1 < n; ++k) jerk[k] = (acc[k + 1] - acc[k - 1]) / (2.0 * dt);
  return jerk;
}

CostBreakdown evaluate_cost(const Trajectory& traj, const Scenario& sc, const RoadIndex& road,
                            const CurvilinearFrame& frame, const VehicleParameters& p, const CostWeights& w) {
  CostBreakdown c;
  const double dt = traj.dt;
  const auto& states = traj.states;
  if (states.size() < 2) return c;

  for (double j : longitudinal_jerk(states, dt)) c.j_jerk += j * j * dt;

  for (std::size_t k = 0; k + 1 < states.size(); ++k) {
    const double v_delta = (states[k + 1].delta - states[k].delta) / dt;
    c.j_sr += v_delta * v_delta * dt;
  }

  for (std::size_t k = 0; k + 1 < states.size(); ++k) {
    const VehicleState& s = states[k];
    const Vec2 pos = s.position();
    const auto ego = frame.try_to_curvilinear(pos);
    if (!ego) {
      std::ostringstream msg;
      msg << "evaluate_cost: state at step " << k << " cannot be projected onto the route frame";
      throw GeometryError(msg.str());
    }

    double lateral = std::abs(ego->d);
    double lane_width = 3.5;
    bool have_lane = false;
    for (LaneletId id : road.lanelets_containing(pos)) {
      const FrenetPoint fp = road.center_frame(id).project_clamped(pos);
      if (!have_lane || std::abs(fp.d) < lateral) {
        lateral = std::abs(fp.d);
        lane_width = road.width_at(id, fp.s);
        have_lane = true;
      }
    }
    c.j_lc += lateral * lateral * dt;

    double worst = 0.0;
    const int step = sc.problem.initial_time + static_cast<int>(k);
    for (const auto& o : sc.obstacles) {
      const ObstacleState& os = o.state_at(step);
      const Vec2 center{os.x, os.y};
      const auto fo = frame.try_to_curvilinear(center);
      if (!fo || fo->s - ego->s <= 0.0 || std::abs(fo->d - ego->d) >= lane_width) continue;
      const double gap = std::max(0.0, (center - pos).norm() - 0.5 * p.length - 0.5 * o.length);
      worst = std::max(worst, std::exp(-w.w_dist * gap));
    }
    c.j_dist += worst * dt;
  }

  c.total = w.jerk * c.j_jerk + w.steering_rate * c.j_sr + w.distance * c.j_dist + w.lane_center * c.j_lc;
  return c;
}

}  // namespace crplan
