#include <doctest.h>

#include <cmath>
#include <numbers>

#include "crplan/drivability.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace crplan;

namespace {

/// States only; the cost and the geometric checks never look at the inputs.
Trajectory states_along(int n, double v, double y, double delta_rate = 0.0, double dt = 0.1) {
  Trajectory t;
  t.dt = dt;
  for (int k = 0; k < n; ++k) t.states.push_back({10.0 + v * k * dt, y, delta_rate * k * dt, v, 0.0});
  return t;
}

std::vector<oracle::P2> plain(const ConvexPolygon& p) {
  std::vector<oracle::P2> out;
  for (const auto& v : p.vertices()) out.push_back({v.x(), v.y()});
  return out;
}

std::vector<oracle::P2> lanelet_outline(const Lanelet& l) {
  std::vector<oracle::P2> out;
  for (const auto& v : l.right_boundary) out.push_back({v.x(), v.y()});
  for (auto it = l.left_boundary.rbegin(); it != l.left_boundary.rend(); ++it) out.push_back({it->x(), it->y()});
  return out;
}

struct Rigid {
  double angle;
  Vec2 shift;
  Vec2 operator()(const Vec2& v) const {
    return Vec2{std::cos(angle) * v.x() - std::sin(angle) * v.y(), std::sin(angle) * v.x() + std::cos(angle) * v.y()} +
           shift;
  }
};

Scenario moved(Scenario sc, const Rigid& m) {
  for (auto& [id, l] : sc.network.lanelets) {
    for (auto& v : l.left_boundary) v = m(v);
    for (auto& v : l.right_boundary) v = m(v);
  }
  for (auto& o : sc.obstacles) {
    for (auto& s : o.states) {
      const Vec2 c = m({s.x, s.y});
      s.x = c.x();
      s.y = c.y();
      s.psi += m.angle;
    }
  }
  return sc;
}

Trajectory moved(Trajectory t, const Rigid& m) {
  for (auto& s : t.states) {
    const Vec2 c = m(s.position());
    s.x = c.x();
    s.y = c.y();
    s.psi += m.angle;
  }
  return t;
}

/// Ego length 4.298 and obstacle length 4.5 give a center distance of gap + 4.399.
Scenario with_leader(double gap, double v, int steps) {
  Scenario sc = test::single_lane_scenario(v);
  sc.obstacles.push_back(test::moving_obstacle(7, 10.0 + gap + 4.399, 0.0, v, steps, 0.1));
  return sc;
}

}  // namespace

TEST_CASE("collision check") {
  const VehicleParameters p;
  Scenario sc = test::single_lane_scenario();
  const Trajectory t = states_along(30, 10.0, 0.0);
  CHECK(check_collision_free(t, sc, p).collision_free);

  sc.obstacles.push_back(test::static_obstacle(3, 30.0, 0.0));
  const auto r = check_collision_free(t, sc, p);
  CHECK_FALSE(r.collision_free);
  REQUIRE(r.first_violation);
  CHECK(r.first_violation->condition == Condition::kCollision);
  // Front bumper at 10 + k + 2.149 meets the obstacle's rear at 27.75.
  CHECK(r.first_violation->step == 16);
}

TEST_CASE("near miss agrees with the sampling oracle") {
  const VehicleParameters p;
  Scenario sc = test::single_lane_scenario();
  const double y = 0.5 * p.width + 0.5 * 1.8 + 0.05;
  sc.obstacles.push_back(test::static_obstacle(3, 20.0, y));
  const Trajectory t = states_along(30, 10.0, 0.0);
  CHECK(check_collision_free(t, sc, p).collision_free);
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    const auto& s = t.states[k];
    const auto ego = OrientedBox{s.position(), s.psi, p.length, p.width}.polygon();
    const auto obs = obstacle_occupancy(sc.obstacles[0], static_cast<int>(k)).polygon();
    CHECK(oracle::classify_overlap(plain(ego), plain(obs), 1e-6) == oracle::Overlap::kDisjoint);
  }
}

TEST_CASE("road compliance") {
  const VehicleParameters p;
  const Scenario sc = test::two_lane_scenario();
  const RoadIndex road(sc.network);
  CHECK(check_road_compliance(states_along(30, 10.0, 0.0), road, p).road_compliant);

  const Scenario single = test::single_lane_scenario();
  const RoadIndex one(single.network);
  Trajectory drift = states_along(30, 10.0, 0.0);
  for (std::size_t k = 5; k < drift.states.size(); ++k) drift.states[k].y = 1.0;
  const auto r = check_road_compliance(drift, one, p);
  CHECK_FALSE(r.road_compliant);
  REQUIRE(r.first_violation);
  CHECK(r.first_violation->step == 5);

  const Trajectory straddle = states_along(30, 10.0, 1.75);
  CHECK(check_road_compliance(straddle, road, p).road_compliant);
  CHECK(check_road_compliance(straddle, road, p, RoadCheckMode::kDenseBoundary).road_compliant);
  const auto a = lanelet_outline(sc.network.lanelets.at(1));
  const auto b = lanelet_outline(sc.network.lanelets.at(2));
  for (const auto& s : straddle.states) {
    const auto box = OrientedBox{s.position(), s.psi, p.length, p.width};
    for (const Vec2& c : box.corners()) {
      const oracle::P2 q{c.x(), c.y()};
      CHECK((oracle::inside_simple_polygon(a, q) || oracle::inside_simple_polygon(b, q)));
    }
  }
  CHECK_FALSE(check_road_compliance(straddle, one, p).road_compliant);
}

TEST_CASE("report flags are independent") {
  const VehicleParameters p;
  Scenario sc = test::single_lane_scenario();
  sc.obstacles.push_back(test::static_obstacle(3, 30.0, 0.0));
  const RoadIndex road(sc.network);
  Trajectory t = states_along(30, 10.0, 0.0);
  t.states[25].y = 3.0;
  const auto r = check_feasibility(t, sc, road, p);
  CHECK_FALSE(r.collision_free);
  CHECK_FALSE(r.road_compliant);
  CHECK_FALSE(r.kinematically_feasible);
  REQUIRE(r.first_violation);
  CHECK(r.first_violation->step <= 16);

  FeasibilityReport ok;
  FeasibilityReport road_only;
  road_only.road_compliant = false;
  road_only.first_violation = Violation{Condition::kRoad, 4};
  const auto m = merge(ok, road_only);
  CHECK(m.collision_free);
  CHECK(m.kinematically_feasible);
  CHECK_FALSE(m.road_compliant);
  CHECK(m.first_violation->step == 4);
}

TEST_CASE("evaluate_cost analytic cases") {
  const VehicleParameters p;
  const Scenario sc = test::single_lane_scenario();
  const RoadIndex road(sc.network);
  const CurvilinearFrame frame(lane_center(sc.network.lanelets.at(1)));

  const auto zero = evaluate_cost(states_along(30, 10.0, 0.0), sc, road, frame, p);
  CHECK(zero.total == 0.0);

  const auto sr = evaluate_cost(states_along(11, 10.0, 0.0, 0.1), sc, road, frame, p);
  CHECK(sr.j_sr == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(22.0 * sr.j_sr == doctest::Approx(0.22).epsilon(1e-9));
  CHECK(sr.total == doctest::Approx(0.22).epsilon(1e-9));

  const auto lc = evaluate_cost(states_along(21, 10.0, 0.5), sc, road, frame, p);
  CHECK(lc.j_lc == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(lc.total == doctest::Approx(4.0).epsilon(1e-9));

  const Scenario lead = with_leader(5.0, 10.0, 20);
  const auto dist = evaluate_cost(states_along(11, 10.0, 0.0), lead, road, frame, p);
  CHECK(dist.j_dist == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
  CHECK(dist.total == doctest::Approx(5.0 * std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("evaluate_cost ignores obstacles behind or in a far lane") {
  const VehicleParameters p;
  Scenario sc = test::single_lane_scenario();
  sc.obstacles.push_back(test::moving_obstacle(1, 0.0, 0.0, 10.0, 20, 0.1));
  sc.obstacles.push_back(test::moving_obstacle(2, 20.0, 7.5, 10.0, 20, 0.1));
  const RoadIndex road(sc.network);
  const CurvilinearFrame frame(lane_center(sc.network.lanelets.at(1)));
  CHECK(evaluate_cost(states_along(11, 10.0, 0.0), sc, road, frame, p).j_dist == 0.0);
}

TEST_CASE("evaluate_cost longitudinal jerk") {
  const VehicleParameters p;
  const Scenario sc = test::single_lane_scenario();
  const RoadIndex road(sc.network);
  const CurvilinearFrame frame(lane_center(sc.network.lanelets.at(1)));
  // Constant acceleration: zero jerk.
  Trajectory t;
  for (int k = 0; k < 20; ++k) t.states.push_back({10.0 + 0.1 * k, 0.0, 0.0, 5.0 + 0.2 * k, 0.0});
  CHECK(evaluate_cost(t, sc, road, frame, p).j_jerk == doctest::Approx(0.0).epsilon(1e-12));
  const auto j = longitudinal_jerk(t.states, 0.1);
  for (double x : j) CHECK(std::abs(x) < 1e-9);
}

TEST_CASE("evaluate_cost reports the unprojectable step") {
  const VehicleParameters p;
  const Scenario sc = test::single_lane_scenario();
  const RoadIndex road(sc.network);
  const CurvilinearFrame frame(lane_center(sc.network.lanelets.at(1)));
  Trajectory t = states_along(10, 10.0, 0.0);
  t.states[3].x = -50.0;
  CHECK_THROWS_WITH_AS(evaluate_cost(t, sc, road, frame, p), doctest::Contains("step 3"), GeometryError);
}

TEST_CASE("cost is invariant under rigid motion") {
  const VehicleParameters p;
  const Scenario sc = with_leader(6.0, 10.0, 40);
  Trajectory t;
  for (int k = 0; k < 30; ++k) {
    const double tk = 0.1 * k;
    t.states.push_back({10.0 + 10.0 * tk, 0.3 * std::sin(tk), 0.02 * std::sin(2.0 * tk), 10.0 + 0.5 * tk * tk,
                        0.05 * std::cos(tk)});
  }
  const RoadIndex road(sc.network);
  const CurvilinearFrame frame(lane_center(sc.network.lanelets.at(1)));
  const auto base = evaluate_cost(t, sc, road, frame, p);

  const Rigid m{0.7, {-30.0, 12.0}};
  const Scenario sc2 = moved(sc, m);
  const RoadIndex road2(sc2.network);
  const CurvilinearFrame frame2(lane_center(sc2.network.lanelets.at(1)));
  const auto other = evaluate_cost(moved(t, m), sc2, road2, frame2, p);
  CHECK(other.j_jerk == doctest::Approx(base.j_jerk).epsilon(1e-9));
  CHECK(other.j_sr == doctest::Approx(base.j_sr).epsilon(1e-9));
  CHECK(other.j_lc == doctest::Approx(base.j_lc).epsilon(1e-9));
  CHECK(other.j_dist == doctest::Approx(base.j_dist).epsilon(1e-9));
  CHECK(base.j_dist > 0.0);
  CHECK(base.j_lc > 0.0);
}

TEST_CASE("cost terms add up over a split") {
  const VehicleParameters p;
  const Scenario sc = with_leader(4.0, 10.0, 40);
  Trajectory t;
  for (int k = 0; k < 30; ++k) {
    const double tk = 0.1 * k;
    t.states.push_back({10.0 + 10.0 * tk, 0.2 * std::sin(tk), 0.03 * tk, 10.0, 0.0});
  }
  const RoadIndex road(sc.network);
  const CurvilinearFrame frame(lane_center(sc.network.lanelets.at(1)));
  const auto whole = evaluate_cost(t, sc, road, frame, p);

  const std::size_t m = 12;
  Trajectory a = t;
  a.states.resize(m + 1);
  Trajectory b = t;
  b.states.erase(b.states.begin(), b.states.begin() + m);
  Scenario later = sc;
  later.problem.initial_time = static_cast<int>(m);
  const auto ca = evaluate_cost(a, sc, road, frame, p);
  const auto cb = evaluate_cost(b, later, road, frame, p);
  CHECK(ca.j_sr + cb.j_sr == doctest::Approx(whole.j_sr).epsilon(1e-9));
  CHECK(ca.j_lc + cb.j_lc == doctest::Approx(whole.j_lc).epsilon(1e-9));
  CHECK(ca.j_dist + cb.j_dist == doctest::Approx(whole.j_dist).epsilon(1e-9));
}

TEST_CASE("j_dist decreases with w_dist") {
  const VehicleParameters p;
  const RoadIndex road(test::single_lane_scenario().network);
  const CurvilinearFrame frame(lane_center(test::single_lane_scenario().network.lanelets.at(1)));
  for (double gap : {0.0, 1.0, 5.0, 20.0}) {
    const Scenario sc = with_leader(gap, 10.0, 20);
    const Trajectory t = states_along(11, 10.0, 0.0);
    CostWeights w;
    const double a = evaluate_cost(t, sc, road, frame, p, w).j_dist;
    w.w_dist *= 2.0;
    const double b = evaluate_cost(t, sc, road, frame, p, w).j_dist;
    CHECK(b <= a);
  }
}
