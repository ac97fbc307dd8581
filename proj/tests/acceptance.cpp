// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. All tolerances are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "crplan/drivability.hpp"
#include "crplan/frenet.hpp"
#include "crplan/harness.hpp"
#include "crplan/reachability.hpp"
#include "crplan/tracking_ocp.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace crplan;

namespace {

constexpr double kCostRelTol = 1e-6;
constexpr double kCostTimeS = 1.0;
constexpr int kReachRollouts = 10000;
constexpr int kReachSteps = 20;
constexpr double kReachTol = 1e-9;
constexpr double kReachTimeS = 10.0;
constexpr double kOcpGridRatio = 1.05;
constexpr double kOcpSelfTol = 1e-6;
constexpr double kOcpTimeS = 30.0;
constexpr double kPolyTol = 1e-9;
constexpr double kRoundTripTol = 1e-9;
constexpr int kSatPairs = 1000;
constexpr double kSatBand = 1e-6;
constexpr double kBasicSolvedFraction = 0.8;
constexpr double kBenchmarkBudgetS = 60.0;
constexpr int kBenchmarkWorkers = 2;
constexpr double kBenchmarkTimeS = 600.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_err(double got, double want) {
  return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

Trajectory line_states(int n, double v, double y, double delta_rate) {
  Trajectory t;
  for (int k = 0; k < n; ++k) t.states.push_back({10.0 + v * 0.1 * k, y, delta_rate * 0.1 * k, v, 0.0});
  return t;
}

Outcome cost_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  const VehicleParameters p;
  const Scenario sc = test::single_lane_scenario();
  const RoadIndex road(sc.network);
  const CurvilinearFrame frame(lane_center(sc.network.lanelets.at(1)));

  Scenario lead = sc;
  lead.obstacles.push_back(test::moving_obstacle(1, 10.0 + 5.0 + 0.5 * p.length + 0.5 * 4.5, 0.0, 10.0, 20, 0.1));

  const double zero = evaluate_cost(line_states(30, 10.0, 0.0, 0.0), sc, road, frame, p).total;
  const double sr = evaluate_cost(line_states(11, 10.0, 0.0, 0.1), sc, road, frame, p).total;
  const double lc = evaluate_cost(line_states(21, 10.0, 0.5, 0.0), sc, road, frame, p).total;
  const double dist = evaluate_cost(line_states(11, 10.0, 0.0, 0.0), lead, road, frame, p).total;

  const double err = std::max({std::abs(zero), rel_err(sr, 0.22), rel_err(lc, 4.0), rel_err(dist, 5.0 * std::exp(-1.0))});
  const double dt = seconds_since(t0);
  return {err <= kCostRelTol && dt < kCostTimeS,
          fmt("zero %.3g, sr %.9f, lc %.9f, dist %.9f, max rel err %.2e, %.3f s", zero, sr, lc, dist, err, dt)};
}

Outcome reach_soundness() {
  const auto t0 = std::chrono::steady_clock::now();
  const double dt = 0.1;
  std::mt19937 rng(2024);
  int outside = 0;
  double worst = 0.0;
  const std::vector<double> a_values{1.0, 3.0, 11.5};
  const int per = kReachRollouts / static_cast<int>(a_values.size()) + 1;
  int done = 0;
  for (double a_max : a_values) {
    const PVSet init{ConvexPolygon::box(0.0, 2.0, 0.0, 8.0)};
    std::vector<PVSet> sets{init};
    for (int k = 0; k < kReachSteps; ++k) sets.push_back(propagate(sets.back(), a_max, dt));
    std::uniform_real_distribution<double> xi0(0.0, 2.0), v0(0.0, 8.0), acc(-a_max, a_max);
    for (int r = 0; r < per && done < kReachRollouts; ++r, ++done) {
      double xi = xi0(rng), v = v0(rng);
      for (int k = 1; k <= kReachSteps; ++k) {
        // Braking is admissible only until standstill.
        const double a = std::max(acc(rng), -v / dt);
        xi += v * dt + 0.5 * a * dt * dt;
        v += a * dt;
        if (!sets[k].contains(xi, v, kReachTol)) {
          ++outside;
          const auto& poly = sets[k].polygon;
          double d = 0.0;
          for (const auto& h : poly.halfplanes()) d = std::max(d, h.normal.dot(Vec2{xi, v}) - h.offset);
          worst = std::max(worst, d);
        }
      }
    }
  }
  const double t = seconds_since(t0);
  return {outside == 0 && done == kReachRollouts && t < kReachTimeS,
          fmt("%d rollouts x %d steps, %d outside (worst %.2e), %.2f s", done, kReachSteps, outside, worst, t)};
}

Outcome ocp_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  VehicleParameters p;
  p.power_limit = false;
  const oracle::KsLimits lim{p.wheelbase, p.delta_max, p.v_delta_max, p.a_max};
  const std::vector<std::vector<Vec2>> toy{
      {{0, 0}, {0.55, 0.02}, {1.1, 0.06}, {1.6, 0.12}},
      {{0, 0}, {0.45, -0.03}, {0.85, -0.05}, {1.3, -0.1}},
      {{0, 0}, {0.5, 0.0}, {1.05, 0.01}, {1.65, 0.02}},
  };
  double worst_ratio = 0.0;
  for (const auto& pts : toy) {
    ReferenceTrajectory ref;
    ref.points = pts;
    const auto sol = solve_tracking_ocp(ref, {0, 0, 0, 5.0, 0}, p, OcpSettings{});
    std::vector<oracle::P2> plain;
    for (const Vec2& v : pts) plain.push_back({v.x(), v.y()});
    const double grid = oracle::grid_search_tracking({0, 0, 0, 5.0, 0}, plain, 0.1, lim, {1, 1}, {0.01, 0.01}, 9);
    worst_ratio = std::max(worst_ratio, sol.objective / grid);
  }
  double worst_self = 0.0;
  const std::vector<VehicleState> starts{{0, 0, 0, 8.0, 0}, {3, -2, 0.1, 12.0, 0.5}, {0, 0, -0.05, 3.0, -1.0}};
  for (const auto& x0 : starts) {
    const std::vector<ControlInput> zero(25);
    const Trajectory t = rollout(x0, zero, 0.1, p);
    ReferenceTrajectory ref;
    for (const auto& s : t.states) ref.points.push_back(s.position());
    worst_self = std::max(worst_self, solve_tracking_ocp(ref, x0, p, OcpSettings{}).objective);
  }
  const double t = seconds_since(t0);
  return {worst_ratio <= kOcpGridRatio && worst_self < kOcpSelfTol && t < kOcpTimeS,
          fmt("worst solver/grid ratio %.4f on 3 problems, self-reference objective %.2e, %.2f s", worst_ratio,
              worst_self, t)};
}

Outcome frenet_correctness() {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-5.0, 5.0), dur(0.5, 8.0);
  double poly = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const FrenetState a{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    const FrenetState b{0.0, u(rng), u(rng), u(rng), u(rng), u(rng)};
    const double T = dur(rng);
    const auto pp = fit_polynomials(a, b, T);
    for (double r : {pp.lateral.value(0) - a.d, pp.lateral.first(0) - a.d_dot, pp.lateral.second(0) - a.d_ddot,
                     pp.lateral.value(T) - b.d, pp.lateral.first(T) - b.d_dot, pp.lateral.second(T) - b.d_ddot,
                     pp.longitudinal.value(0) - a.s, pp.longitudinal.first(0) - a.s_dot,
                     pp.longitudinal.second(0) - a.s_ddot, pp.longitudinal.first(T) - b.s_dot,
                     pp.longitudinal.second(T) - b.s_ddot}) {
      poly = std::max(poly, std::abs(r));
    }
  }

  Polyline arc;
  for (int i = 0; i <= 90; ++i) {
    const double a = 1.2 * std::numbers::pi * i / 90;
    arc.push_back({25.0 * std::cos(a), 25.0 * std::sin(a)});
  }
  const CurvilinearFrame curved(arc);
  std::uniform_real_distribution<double> s(0.5, curved.length() - 0.5), d(-5.0, 5.0);
  double trip = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 q = curved.to_cartesian(s(rng), d(rng));
    const FrenetPoint fp = curved.to_curvilinear(q);
    trip = std::max(trip, (curved.to_cartesian(fp.s, fp.d) - q).norm());
  }

  const CurvilinearFrame straight({{0, 0}, {40, 0}, {100, 0}});
  bool identity = true;
  std::uniform_real_distribution<double> ss(0.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double si = ss(rng), di = d(rng);
    const Vec2 q = straight.to_cartesian(si, di);
    const FrenetPoint fp = straight.to_curvilinear(q);
    identity = identity && q.x() == si && q.y() == di && fp.s == si && fp.d == di;
  }
  const auto sample = to_cartesian_sample(fit_polynomials({5, 9, 0.3, 1.0, 0.1, 0}, {0, 12, 0, -1.0, 0, 0}, 4.0),
                                          straight, 0.1, VehicleParameters{});
  if (!sample) {
    identity = false;
  } else {
    const auto pp = fit_polynomials({5, 9, 0.3, 1.0, 0.1, 0}, {0, 12, 0, -1.0, 0, 0}, 4.0);
    for (std::size_t k = 0; k < sample->trajectory.states.size(); ++k) {
      const double t = 0.1 * static_cast<double>(k);
      identity = identity && sample->trajectory.states[k].x == pp.longitudinal.value(t) &&
                 sample->trajectory.states[k].y == pp.lateral.value(t);
    }
  }
  return {poly < kPolyTol && trip < kRoundTripTol && identity,
          fmt("max boundary residual %.2e, max round trip %.2e, straight identity %s", poly, trip,
              identity ? "exact" : "broken")};
}

Outcome sat_equivalence() {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ang(-std::numbers::pi, std::numbers::pi);
  std::uniform_int_distribution<int> nverts(3, 8);
  int compared = 0, disagree = 0;
  auto random_convex = [&](Vec2 c) {
    std::vector<Vec2> pts;
    const int n = nverts(rng);
    for (int i = 0; i < n; ++i) pts.push_back(c + Vec2{u(rng), u(rng)});
    return ConvexPolygon::hull(pts);
  };
  auto plain = [](const ConvexPolygon& p) {
    std::vector<oracle::P2> out;
    for (const auto& v : p.vertices()) out.push_back({v.x(), v.y()});
    return out;
  };
  for (int i = 0; i < kSatPairs; ++i) {
    ConvexPolygon a, b;
    if (i % 2 == 0) {
      a = OrientedBox{{0, 0}, ang(rng), 1.0 + 0.5 * u(rng), 0.5 + 0.2 * u(rng)}.polygon();
      b = OrientedBox{{1.2 * u(rng), 1.2 * u(rng)}, ang(rng), 1.0 + 0.5 * u(rng), 0.5 + 0.2 * u(rng)}.polygon();
    } else {
      a = random_convex({0, 0});
      b = random_convex({1.5 * u(rng), 1.5 * u(rng)});
    }
    if (a.size() < 3 || b.size() < 3) continue;
    const auto truth = oracle::classify_overlap(plain(a), plain(b), kSatBand);
    if (truth == oracle::Overlap::kBand) continue;
    ++compared;
    if (polygons_intersect(a, b) != (truth == oracle::Overlap::kIntersecting)) ++disagree;
  }
  return {disagree == 0 && compared > kSatPairs / 2,
          fmt("%d of %d pairs outside the band compared, %d disagreements", compared, kSatPairs, disagree)};
}

bool independently_valid(const Trajectory& t, const Scenario& sc, const VehicleParameters& p) {
  const RoadIndex road(sc.network);
  if (!check_collision_free(t, sc, p, sc.problem.initial_time).collision_free) return false;
  if (!check_kinematic(t, p).kinematically_feasible) return false;
  if (!check_road_compliance(t, road, p).road_compliant) return false;
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    if (goal_reached(t.states[k], sc.problem.initial_time + static_cast<int>(k), sc.problem.goal, sc.network)) {
      return true;
    }
  }
  return false;
}

struct BenchmarkRun {
  std::vector<ScenarioResult> results;
  std::string results_csv;
  std::string leaderboard_csv;
  std::string plot;
  double seconds = 0.0;
};

BenchmarkRun run_corpus(const std::vector<Scenario>& corpus) {
  HarnessConfig cfg;
  cfg.budget_s = kBenchmarkBudgetS;
  cfg.workers = kBenchmarkWorkers;
  const auto t0 = std::chrono::steady_clock::now();
  BenchmarkRun run;
  run.results = run_benchmark(corpus, planner_ids(), cfg);
  run.seconds = seconds_since(t0);
  run.results_csv = format_results_csv(run.results);
  run.leaderboard_csv = format_leaderboard_csv(build_leaderboard(run.results));
  try {
    run.plot = emit_cost_plot(run.results);
  } catch (const std::invalid_argument& e) {
    run.plot = std::string("error: ") + e.what();
  }
  return run;
}

Outcome end_to_end(const std::vector<Scenario>& corpus, const BenchmarkRun& run) {
  const VehicleParameters p;
  std::map<std::string, const Scenario*> by_id;
  for (const auto& sc : corpus) by_id[sc.id] = &sc;
  std::map<std::string, std::pair<int, int>> basic;
  int solved = 0, verified = 0;
  for (const auto& r : run.results) {
    const bool is_basic = r.scenario_id.rfind("basic_", 0) == 0;
    if (is_basic) ++basic[r.planner_id].second;
    if (r.status != RunStatus::kSolved) continue;
    ++solved;
    if (is_basic) ++basic[r.planner_id].first;
    if (r.solution && independently_valid(*r.solution, *by_id.at(r.scenario_id), p)) ++verified;
  }
  bool pass = corpus.size() >= 20 && solved == verified && run.seconds < kBenchmarkTimeS;
  std::string detail = fmt("%zu scenarios;", corpus.size());
  for (const auto& [planner, counts] : basic) {
    const double frac = counts.second ? static_cast<double>(counts.first) / counts.second : 0.0;
    pass = pass && counts.second > 0 && frac >= kBasicSolvedFraction;
    detail += fmt(" %s basic %d/%d;", planner.c_str(), counts.first, counts.second);
  }
  pass = pass && basic.size() == planner_ids().size();
  detail += fmt(" %d/%d solved outputs re-verified; %.1f s", verified, solved, run.seconds);
  return {pass, detail};
}

Outcome leaderboard_semantics() {
  auto solved = [](const char* sc, const char* pl, double total) {
    ScenarioResult r;
    r.scenario_id = sc;
    r.planner_id = pl;
    r.status = RunStatus::kSolved;
    r.cost = CostBreakdown{0, 0, 0, 0, total};
    return r;
  };
  auto failed = [](const char* sc, const char* pl) {
    ScenarioResult r;
    r.scenario_id = sc;
    r.planner_id = pl;
    r.status = RunStatus::kPlannerFailure;
    return r;
  };
  const std::vector<ScenarioResult> fixture{solved("s1", "alpha", 4.0), solved("s1", "beta", 6.0),
                                            solved("s2", "alpha", 2.0), solved("s2", "beta", 2.0),
                                            failed("s3", "alpha"),      solved("s3", "beta", 9.0),
                                            solved("s4", "alpha", 8.0), failed("s4", "beta")};
  const auto board = build_leaderboard(fixture);
  bool ok = board.size() == 2;
  for (const auto& e : board) ok = ok && e.top1 <= e.solved;
  const std::string got = format_leaderboard_csv(board);
  ok = ok && got == "planner,solved,top1\nalpha,3,3\nbeta,3,2\n";

  const std::string table = format_leaderboard_csv({{"tum", 130, 84}, {"sbu", 116, 54}});
  ok = ok && table == "planner,solved,top1\ntum,130,84\nsbu,116,54\n";
  return {ok, "fixture alpha 3/3, beta 3/2; injected rows 130/84 and 116/54 render exactly"};
}

Outcome determinism(const BenchmarkRun& a, const BenchmarkRun& b) {
  const bool csv = a.results_csv == b.results_csv;
  const bool board = a.leaderboard_csv == b.leaderboard_csv;
  const bool svg = a.plot == b.plot;
  return {csv && board && svg, fmt("results CSV %s, leaderboard CSV %s, SVG %s (%zu bytes)", csv ? "identical" : "differs",
                                   board ? "identical" : "differs", svg ? "identical" : "differs", a.plot.size())};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int n, const char* name, const Outcome& o) {
    std::printf("criterion %d %s: %s  %s\n", n, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };

  report(1, "cost exactness", guarded(cost_exactness));
  report(2, "reachability soundness", guarded(reach_soundness));
  report(3, "OCP oracle equivalence", guarded(ocp_equivalence));
  report(4, "Frenet correctness", guarded(frenet_correctness));
  report(5, "SAT oracle equivalence", guarded(sat_equivalence));

  std::vector<Scenario> corpus;
  BenchmarkRun first, second;
  Outcome e2e, det;
  try {
    corpus = load_corpus(CRPLAN_CORPUS_DIR);
    first = run_corpus(corpus);
    e2e = end_to_end(corpus, first);
    second = run_corpus(corpus);
    det = determinism(first, second);
  } catch (const std::exception& e) {
    e2e = det = Outcome{false, std::string("exception: ") + e.what()};
  }
  report(6, "end-to-end benchmark", e2e);
  report(7, "leaderboard semantics", guarded(leaderboard_semantics));
  report(8, "determinism", det);
  return failures == 0 ? 0 : 1;
}
