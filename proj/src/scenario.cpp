#include "crplan/scenario.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace crplan {

namespace {

[[noreturn]] void fail(const std::string& what) { throw InputError(what); }

std::string lanelet_tag(LaneletId id) { return "lanelet " + std::to_string(id); }

}  // namespace

const Lanelet& LaneletNetwork::at(LaneletId id) const {
  const auto it = lanelets.find(id);
  if (it == lanelets.end()) fail("unknown " + lanelet_tag(id));
  return it->second;
}

const ObstacleState& Obstacle::state_at(int k) const {
  if (k <= 0) return states.front();
  const auto idx = static_cast<std::size_t>(k);
  return idx < states.size() ? states[idx] : states.back();
}

void VehicleParameters::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"wheelbase", wheelbase}, {"length", length},     {"width", width},
      {"a_max", a_max},         {"v_max", v_max},       {"v_switch", v_switch},
      {"delta_max", delta_max}, {"v_delta_max", v_delta_max}};
  for (const auto& [name, value] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) fail(std::string("vehicle parameter '") + name + "' must be positive");
  }
  if (delta_max >= std::numbers::pi / 2.0) fail("vehicle parameter 'delta_max' must be below pi/2");
}

Polyline lane_center(const Lanelet& l) {
  Polyline c;
  c.reserve(l.left_boundary.size());
  for (std::size_t i = 0; i < l.left_boundary.size(); ++i) {
    c.push_back(0.5 * (l.left_boundary[i] + l.right_boundary[i]));
  }
  return c;
}

Polyline lanelet_polygon(const Lanelet& l) {
  Polyline poly(l.left_boundary.begin(), l.left_boundary.end());
  poly.insert(poly.end(), l.right_boundary.rbegin(), l.right_boundary.rend());
  return poly;
}

OrientedBox obstacle_occupancy(const Obstacle& o, int k) {
  const ObstacleState& s = o.state_at(k);
  return OrientedBox{{s.x, s.y}, s.psi, o.length, o.width};
}

OrientedBox ego_occupancy(const VehicleState& s, const VehicleParameters& p) {
  return OrientedBox{{s.x, s.y}, s.psi, p.length, p.width};
}

bool goal_reached(const VehicleState& s, int k, const GoalSpec& g, const LaneletNetwork& net) {
  if (k < g.t_lo || k > g.t_hi) return false;
  if (s.v < g.v_lo || s.v > g.v_hi) return false;
  const Vec2 p = s.position();
  if (g.has_lanelets()) {
    for (LaneletId id : g.lanelet_ids()) {
      if (!net.contains(id)) continue;
      if (point_in_polygon(lanelet_polygon(net.at(id)), p)) return true;
    }
    return false;
  }
  return point_in_polygon(g.polygon(), p);
}

void validate_scenario(const Scenario& sc) {
  if (!(sc.dt > 0.0)) fail("dt must be positive");
  if (sc.horizon < 0) fail("horizon must be nonnegative");
  const auto& net = sc.network;
  if (net.lanelets.empty()) fail("lanelet network is empty");

  for (const auto& [id, l] : net.lanelets) {
    if (id != l.id) fail(lanelet_tag(id) + ": key/id mismatch");
    if (l.left_boundary.size() < 2) fail(lanelet_tag(id) + ": boundaries need at least 2 vertices");
    if (l.left_boundary.size() != l.right_boundary.size()) {
      std::ostringstream msg;
      msg << lanelet_tag(id) << ": boundary vertex-count mismatch (left " << l.left_boundary.size()
          << ", right " << l.right_boundary.size() << ")";
      fail(msg.str());
    }
    if (!is_simple_polyline(l.left_boundary) || !is_simple_polyline(l.right_boundary)) {
      fail(lanelet_tag(id) + ": self-intersecting boundary");
    }
    for (LaneletId s : l.successors) {
      if (!net.contains(s)) fail(lanelet_tag(id) + ": dangling successor reference " + std::to_string(s));
    }
    if (l.adjacent_left) {
      if (!net.contains(*l.adjacent_left)) {
        fail(lanelet_tag(id) + ": dangling adj_left reference " + std::to_string(*l.adjacent_left));
      }
      if (net.at(*l.adjacent_left).adjacent_right != id) {
        fail(lanelet_tag(id) + ": adjacency not symmetric with " + lanelet_tag(*l.adjacent_left));
      }
    }
    if (l.adjacent_right) {
      if (!net.contains(*l.adjacent_right)) {
        fail(lanelet_tag(id) + ": dangling adj_right reference " + std::to_string(*l.adjacent_right));
      }
      if (net.at(*l.adjacent_right).adjacent_left != id) {
        fail(lanelet_tag(id) + ": adjacency not symmetric with " + lanelet_tag(*l.adjacent_right));
      }
    }
    if (l.speed_limit && !(*l.speed_limit >= 0.0)) fail(lanelet_tag(id) + ": negative speed limit");
  }

  for (const auto& o : sc.obstacles) {
    const std::string tag = "obstacle " + std::to_string(o.id);
    if (!(o.length > 0.0) || !(o.width > 0.0)) fail(tag + ": length and width must be positive");
    if (o.states.empty()) fail(tag + ": no states");
  }

  const auto& g = sc.problem.goal;
  if (g.v_lo > g.v_hi) fail("goal: v interval is reversed");
  if (g.t_lo > g.t_hi) fail("goal: t interval is reversed");
  if (g.has_lanelets()) {
    if (g.lanelet_ids().empty()) fail("goal: empty lanelet list");
    for (LaneletId id : g.lanelet_ids()) {
      if (!net.contains(id)) fail("goal: dangling lanelet reference " + std::to_string(id));
    }
  } else if (g.polygon().size() < 3) {
    fail("goal: polygon needs at least 3 vertices");
  }

  const Vec2 p0 = sc.problem.initial_state.position();
  bool inside = false;
  for (const auto& [id, l] : net.lanelets) {
    if (point_in_polygon(lanelet_polygon(l), p0)) {
      inside = true;
      break;
    }
  }
  if (!inside) fail("initial position lies outside the lanelet network");
}

}  // namespace crplan
