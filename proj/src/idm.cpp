#include "crplan/idm.hpp"

#include <algorithm>
#include <cmath>

#include "crplan/routing.hpp"

namespace crplan {

double idm_acceleration(double v, double v0, double gap, double dv, const IdmParams& p) {
  if (v0 <= 0.0) return -p.b;
  const double free = p.a * (1.0 - std::pow(std::max(v, 0.0) / v0, p.delta));
  if (!std::isfinite(gap)) return free;
  const double s_star = p.s0 + std::max(0.0, v * p.time_headway + v * dv / (2.0 * std::sqrt(p.a * p.b)));
  const double ratio = s_star / std::max(gap, 1e-3);
  return free - p.a * ratio * ratio;
}

double idm_equilibrium_gap(double v, double v0, const IdmParams& p) {
  return (p.s0 + v * p.time_headway) / std::sqrt(1.0 - std::pow(v / v0, p.delta));
}

ObstacleState ReactiveAgent::state() const {
  const double s_c = std::clamp(s, 0.0, path.length());
  const Vec2 pos = path.to_cartesian(s_c, 0.0);
  return {pos.x(), pos.y(), path.heading_at(s_c), v};
}

std::vector<ReactiveAgent> make_reactive_agents(const Scenario& sc, const RoadIndex& road, int k) {
  std::vector<ReactiveAgent> out;
  for (const auto& o : sc.obstacles) {
    const ObstacleState& st = o.state_at(k);
    const Vec2 pos{st.x, st.y};
    const auto id = road.best_lanelet(pos);
    if (!id) continue;
    Polyline center;
    std::vector<LaneletId> seen;
    for (std::optional<LaneletId> cur = id; cur && std::find(seen.begin(), seen.end(), *cur) == seen.end();) {
      seen.push_back(*cur);
      for (const auto& p : lane_center(road.lanelet(*cur))) {
        if (center.empty() || (p - center.back()).norm() > 1e-3) center.push_back(p);
      }
      const auto& succ = road.lanelet(*cur).successors;
      cur = succ.empty() ? std::nullopt : std::optional<LaneletId>(succ.front());
    }
    CurvilinearFrame path(center);
    const double s = path.project_clamped(pos).s;
    out.push_back(ReactiveAgent{o.id, o.length, o.width, std::move(path), s, std::max(0.0, st.v), st.v});
  }
  return out;
}

void reactive_obstacles_step(std::vector<ReactiveAgent>& agents, const VehicleState& ego,
                             const VehicleParameters& ego_params, double dt, const IdmParams& p) {
  constexpr double half_lane = 1.75;
  std::vector<double> acc(agents.size(), 0.0);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const ReactiveAgent& me = agents[i];
    double gap = std::numeric_limits<double>::infinity();
    double v_lead = 0.0;
    auto consider = [&](const Vec2& pos, double length, double v) {
      const auto fp = me.path.try_to_curvilinear(pos);
      if (!fp || std::abs(fp->d) > half_lane || fp->s <= me.s) return;
      const double g = fp->s - me.s - 0.5 * (length + me.length);
      if (g < gap) {
        gap = g;
        v_lead = v;
      }
    };
    for (std::size_t j = 0; j < agents.size(); ++j) {
      if (j == i) continue;
      const ObstacleState o = agents[j].state();
      consider({o.x, o.y}, agents[j].length, agents[j].v);
    }
    consider(ego.position(), ego_params.length, ego.v);
    acc[i] = idm_acceleration(me.v, me.v0, std::max(gap, 0.0), me.v - v_lead, p);
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    ReactiveAgent& a = agents[i];
    const double v_new = std::max(0.0, a.v + acc[i] * dt);
    a.s = std::min(a.path.length(), a.s + 0.5 * (a.v + v_new) * dt);
    a.v = v_new;
  }
}

}  // namespace crplan
