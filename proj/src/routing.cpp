#include "crplan/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

namespace crplan {

namespace {

bool centerline_enters(const RoadIndex& road, LaneletId id, const Polyline& region) {
  const CurvilinearFrame& frame = road.center_frame(id);
  const double len = frame.length();
  const int n = std::max(2, static_cast<int>(std::ceil(len / 0.25)) + 1);
  for (int i = 0; i < n; ++i) {
    if (point_in_polygon(region, frame.to_cartesian(len * i / (n - 1), 0.0))) return true;
  }
  return false;
}

}  // namespace

std::vector<LaneletId> goal_lanelets(const RoadIndex& road, const GoalSpec& goal) {
  if (goal.has_lanelets()) return goal.lanelet_ids();
  std::vector<LaneletId> out;
  for (LaneletId id : road.ids()) {
    if (centerline_enters(road, id, goal.polygon())) out.push_back(id);
  }
  if (!out.empty()) return out;
  const ConvexPolygon region = ConvexPolygon::hull(goal.polygon());
  for (LaneletId id : road.ids()) {
    if (road.occupies(id, region)) out.push_back(id);
  }
  return out;
}

Route plan_route(const RoadIndex& road, LaneletId start, const GoalSpec& goal, double extension_length,
                 double lane_change_penalty) {
  const auto& net = road.network();
  const auto targets_vec = goal_lanelets(road, goal);
  const std::set<LaneletId> targets(targets_vec.begin(), targets_vec.end());

  // Dijkstra; edge cost is the length of the lanelet being left.
  std::map<LaneletId, double> dist;
  std::map<LaneletId, std::pair<LaneletId, bool>> parent;
  using Item = std::pair<double, LaneletId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[start] = 0.0;
  open.push({0.0, start});
  std::optional<LaneletId> reached;
  while (!open.empty()) {
    const auto [d, id] = open.top();
    open.pop();
    if (d > dist[id]) continue;
    if (targets.count(id)) {
      reached = id;
      break;
    }
    const Lanelet& l = net.at(id);
    auto relax = [&](LaneletId next, double cost, bool lc) {
      const double nd = d + cost;
      const auto it = dist.find(next);
      if (it == dist.end() || nd < it->second) {
        dist[next] = nd;
        parent[next] = {id, lc};
        open.push({nd, next});
      }
    };
    for (LaneletId s : l.successors) relax(s, road.length(id), false);
    if (l.adjacent_left) relax(*l.adjacent_left, lane_change_penalty, true);
    if (l.adjacent_right) relax(*l.adjacent_right, lane_change_penalty, true);
  }

  Route route;
  if (reached) {
    for (LaneletId cur = *reached;;) {
      route.lanelets.push_back(cur);
      const auto it = parent.find(cur);
      if (it == parent.end()) break;
      route.lane_change.push_back(it->second.second);
      cur = it->second.first;
    }
    std::reverse(route.lanelets.begin(), route.lanelets.end());
    std::reverse(route.lane_change.begin(), route.lane_change.end());
  } else {
    route.lanelets.push_back(start);
  }

  std::set<LaneletId> seen(route.lanelets.begin(), route.lanelets.end());
  double extra = 0.0;
  while (extra < extension_length) {
    const Lanelet& last = net.at(route.lanelets.back());
    if (last.successors.empty()) break;
    const LaneletId next = last.successors.front();
    if (seen.count(next)) break;
    seen.insert(next);
    route.lanelets.push_back(next);
    route.lane_change.push_back(false);
    extra += road.length(next);
  }
  return route;
}

namespace {

void append_point(Polyline& path, const Vec2& p) {
  if (path.empty() || (path.back() - p).norm() > 1e-3) path.push_back(p);
}

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

}  // namespace

Polyline route_centerline(const RoadIndex& road, const Route& route, double start_s, double blend_length) {
  Polyline path;
  double cursor = 0.0;
  for (std::size_t i = 0; i < route.lanelets.size(); ++i) {
    const LaneletId id = route.lanelets[i];
    const CurvilinearFrame& frame = road.center_frame(id);
    const auto arcs = frame.arc_lengths();
    const auto& ref = frame.reference();
    const double len = frame.length();
    const bool change_next = i < route.lane_change.size() && route.lane_change[i];

    double end = len;
    if (change_next) end = std::clamp((i == 0 ? start_s : cursor) + 5.0, cursor, len);

    append_point(path, frame.to_cartesian(std::min(cursor, len), 0.0));
    for (std::size_t v = 0; v < ref.size(); ++v) {
      if (arcs[v] > cursor && arcs[v] < end) append_point(path, ref[v]);
    }
    append_point(path, frame.to_cartesian(end, 0.0));

    if (!change_next) {
      cursor = 0.0;
      continue;
    }
    const CurvilinearFrame& target = road.center_frame(route.lanelets[i + 1]);
    const double span = std::max(std::min(blend_length, len - end), 0.0);
    const int samples = std::max(1, static_cast<int>(std::ceil(span)));
    Vec2 last_target = target.to_cartesian(target.project_clamped(frame.to_cartesian(end, 0.0)).s, 0.0);
    for (int k = 1; k <= samples; ++k) {
      const double s = end + span * k / samples;
      const Vec2 a = frame.to_cartesian(s, 0.0);
      const double sb = target.project_clamped(a).s;
      const Vec2 b = target.to_cartesian(sb, 0.0);
      const double w = span > 0.0 ? smoothstep((s - end) / span) : 1.0;
      append_point(path, (1.0 - w) * a + w * b);
      last_target = b;
    }
    cursor = target.project_clamped(last_target).s;
  }
  return path;
}

CurvilinearFrame build_reference_frame(const RoadIndex& road, const PlanningProblem& problem) {
  const Vec2 p0 = problem.initial_state.position();
  const auto start = road.best_lanelet(p0);
  if (!start) throw GeometryError("initial position is not on any lanelet");
  const double s0 = road.center_frame(*start).project_clamped(p0).s;
  const Route route = plan_route(road, *start, problem.goal);
  return CurvilinearFrame(route_centerline(road, route, s0));
}

}  // namespace crplan
