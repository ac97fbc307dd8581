#include "crplan/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "crplan/routing.hpp"
#include "crplan/scenario_io.hpp"

namespace crplan {

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kSolved:
      return "solved";
    case RunStatus::kInfeasibleOutput:
      return "infeasible-output";
    case RunStatus::kPlannerFailure:
      return "planner-failure";
    case RunStatus::kTimeout:
      return "timeout";
  }
  return "unknown";
}

RunStatus parse_run_status(std::string_view name) {
  for (RunStatus s : {RunStatus::kSolved, RunStatus::kInfeasibleOutput, RunStatus::kPlannerFailure,
                      RunStatus::kTimeout}) {
    if (to_string(s) == name) return s;
  }
  throw InputError("unknown status '" + std::string(name) + "'");
}

const std::vector<std::string>& planner_ids() {
  static const std::vector<std::string> ids{"reach", "frenet"};
  return ids;
}

PlanResult run_planner(const std::string& planner_id, const Scenario& sc, const PlannerConfig& cfg,
                       const Deadline& deadline) {
  if (planner_id == "reach") return plan_reach(sc, cfg.vehicle, cfg.reach, deadline);
  if (planner_id == "frenet") return run_receding_horizon(sc, cfg.vehicle, cfg.frenet, deadline);
  throw std::invalid_argument("unknown planner '" + planner_id + "'");
}

ScenarioResult verify_trajectory(const Trajectory& traj, const Scenario& sc, const VehicleParameters& p) {
  ScenarioResult r;
  r.scenario_id = sc.id;
  r.status = RunStatus::kInfeasibleOutput;
  if (traj.states.empty()) {
    r.message = "empty trajectory";
    return r;
  }
  if (std::abs(traj.dt - sc.dt) > 1e-9) {
    r.message = "time step differs from the scenario";
    return r;
  }
  if (state_distance(traj.states.front(), sc.problem.initial_state) > 1e-6) {
    r.message = "trajectory does not start at the initial state";
    return r;
  }
  const RoadIndex road(sc.network);
  const FeasibilityReport rep = check_feasibility(traj, sc, road, p);
  if (!rep.feasible()) {
    r.message = to_string(rep.first_violation->condition) + " violation at step " +
                std::to_string(rep.first_violation->step);
    return r;
  }
  const auto goal = first_goal_step(traj, sc);
  if (!goal) {
    r.message = "goal not reached";
    return r;
  }
  try {
    const CurvilinearFrame frame = build_reference_frame(road, sc.problem);
    r.cost = evaluate_cost(traj, sc, road, frame, p);
  } catch (const GeometryError& e) {
    r.message = std::string("cost evaluation failed: ") + e.what();
    return r;
  }
  r.status = RunStatus::kSolved;
  r.message = "goal reached at step " + std::to_string(*goal);
  return r;
}

namespace {

Obstacle constant_velocity_prediction(const Obstacle& o, const ObstacleState& now, int k, int horizon, double dt) {
  Obstacle out{o.id, o.length, o.width, {}};
  for (int j = 0; j <= std::max(horizon, k); ++j) {
    const double t = std::max(0, j - k) * dt;
    out.states.push_back({now.x + now.v * std::cos(now.psi) * t, now.y + now.v * std::sin(now.psi) * t, now.psi,
                          now.v});
  }
  return out;
}

struct ClosedLoop {
  PlanResult result;
  Scenario realized;
};

/// Replans every few steps against IDM agents; the realized obstacle motion is returned for verification.
ClosedLoop run_closed_loop(const std::string& planner_id, const Scenario& sc, const HarnessConfig& cfg,
                           const Deadline& deadline) {
  const RoadIndex road(sc.network);
  const int t0 = sc.problem.initial_time;
  auto agents = make_reactive_agents(sc, road, t0);

  ClosedLoop out{{std::nullopt, ""}, sc};
  std::map<int, std::size_t> realized_index;
  for (std::size_t i = 0; i < out.realized.obstacles.size(); ++i) {
    Obstacle& o = out.realized.obstacles[i];
    for (const auto& a : agents) {
      if (a.id != o.id) continue;
      std::vector<ObstacleState> hist;
      for (int j = 0; j <= t0; ++j) hist.push_back(o.state_at(j));
      o.states = hist;
      realized_index[o.id] = i;
    }
  }

  Trajectory traj;
  traj.dt = sc.dt;
  traj.states.push_back(sc.problem.initial_state);
  int k = t0;
  const int last = std::min(sc.horizon, sc.problem.goal.t_hi);
  while (k < last) {
    deadline.check();
    Scenario snap = sc;
    snap.problem.initial_state = traj.states.back();
    snap.problem.initial_time = k;
    for (auto& o : snap.obstacles) {
      const auto it = realized_index.find(o.id);
      const ObstacleState now = it == realized_index.end() ? o.state_at(k) : out.realized.obstacles[it->second].states.back();
      if (it != realized_index.end()) o = constant_velocity_prediction(o, now, k, sc.horizon, sc.dt);
    }
    const PlanResult plan = planner_id == "frenet" ? plan_frenet_segment(snap, cfg.planners.vehicle, cfg.planners.frenet, deadline)
                                                   : run_planner(planner_id, snap, cfg.planners, deadline);
    if (!plan.ok()) {
      out.result.message = "replan at step " + std::to_string(k) + " failed: " + plan.message;
      return out;
    }
    const int steps = std::min<int>(cfg.reactive_replan_steps, static_cast<int>(plan.trajectory->inputs.size()));
    if (steps <= 0) {
      out.result.message = "replan at step " + std::to_string(k) + " returned no motion";
      return out;
    }
    for (int j = 0; j < steps && k < last; ++j) {
      reactive_obstacles_step(agents, traj.states.back(), cfg.planners.vehicle, sc.dt, cfg.idm);
      for (const auto& a : agents) out.realized.obstacles[realized_index.at(a.id)].states.push_back(a.state());
      traj.inputs.push_back(plan.trajectory->inputs[j]);
      traj.states.push_back(plan.trajectory->states[j + 1]);
      ++k;
      if (goal_reached(traj.states.back(), k, sc.problem.goal, sc.network)) {
        out.result = {traj, "goal reached at step " + std::to_string(k)};
        return out;
      }
    }
  }
  out.result.message = "horizon exhausted at step " + std::to_string(k);
  return out;
}

}  // namespace

ScenarioResult run_planner_on_scenario(const std::string& planner_id, const Scenario& sc, const HarnessConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Deadline deadline(cfg.budget_s);
  ScenarioResult r;
  r.scenario_id = sc.id;
  r.planner_id = planner_id;

  std::optional<Trajectory> traj;
  Scenario verify_against = sc;
  try {
    if (cfg.reactive) {
      ClosedLoop loop = run_closed_loop(planner_id, sc, cfg, deadline);
      traj = std::move(loop.result.trajectory);
      r.message = loop.result.message;
      verify_against = std::move(loop.realized);
    } else {
      PlanResult plan = run_planner(planner_id, sc, cfg.planners, deadline);
      traj = std::move(plan.trajectory);
      r.message = plan.message;
    }
  } catch (const DeadlineExceeded&) {
    r.status = RunStatus::kTimeout;
    r.message = "time budget exceeded";
  } catch (const std::exception& e) {
    r.status = RunStatus::kPlannerFailure;
    r.message = e.what();
  }
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (r.status == RunStatus::kTimeout || r.wall_time_s > cfg.budget_s) {
    r.status = RunStatus::kTimeout;
    r.cost.reset();
    return r;
  }
  if (!traj) {
    r.status = RunStatus::kPlannerFailure;
    return r;
  }
  ScenarioResult v = verify_trajectory(*traj, verify_against, cfg.planners.vehicle);
  r.status = v.status;
  r.cost = v.cost;
  r.message = v.message;
  if (r.status == RunStatus::kSolved) r.solution = std::move(traj);
  return r;
}

std::vector<ScenarioResult> run_benchmark(const std::vector<Scenario>& scenarios,
                                          const std::vector<std::string>& planners, const HarnessConfig& cfg) {
  std::vector<std::pair<const Scenario*, std::string>> jobs;
  for (const auto& sc : scenarios) {
    for (const auto& p : planners) jobs.emplace_back(&sc, p);
  }
  std::vector<ScenarioResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      results[i] = run_planner_on_scenario(jobs[i].second, *jobs[i].first, cfg);
    }
  };
  const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  std::sort(results.begin(), results.end(), [](const ScenarioResult& a, const ScenarioResult& b) {
    return std::tie(a.scenario_id, a.planner_id) < std::tie(b.scenario_id, b.planner_id);
  });
  return results;
}

std::vector<Scenario> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw InputError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Scenario> out;
  for (const auto& f : files) out.push_back(load_scenario(f));
  return out;
}

std::vector<LeaderboardEntry> build_leaderboard(const std::vector<ScenarioResult>& results) {
  std::map<std::string, LeaderboardEntry> table;
  std::map<std::string, std::vector<const ScenarioResult*>> by_scenario;
  for (const auto& r : results) {
    auto& e = table[r.planner_id];
    e.planner_id = r.planner_id;
    if (r.status == RunStatus::kSolved && r.cost) {
      ++e.solved;
      by_scenario[r.scenario_id].push_back(&r);
    }
  }
  for (const auto& [id, solved] : by_scenario) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto* r : solved) best = std::min(best, r->cost->total);
    for (const auto* r : solved) {
      if (r->cost->total <= best + 1e-9 * std::max(1.0, std::abs(best))) ++table[r->planner_id].top1;
    }
  }
  std::vector<LeaderboardEntry> out;
  for (auto& [id, e] : table) out.push_back(e);
  std::stable_sort(out.begin(), out.end(), [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
    if (a.top1 != b.top1) return a.top1 > b.top1;
    return a.solved > b.solved;
  });
  return out;
}

std::string format_leaderboard_csv(const std::vector<LeaderboardEntry>& entries) {
  std::ostringstream out;
  out << "planner,solved,top1\n";
  for (const auto& e : entries) out << e.planner_id << ',' << e.solved << ',' << e.top1 << '\n';
  return out.str();
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out(1);
  for (char c : line) {
    if (c == sep) {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

constexpr std::string_view kResultsHeader =
    "scenario,planner,status,cost_total,cost_jerk,cost_sr,cost_dist,cost_lc,wall_time_s";

}  // namespace

std::string format_results_csv(const std::vector<ScenarioResult>& results, bool record_wall_time) {
  std::ostringstream out;
  out << kResultsHeader << '\n';
  for (const auto& r : results) {
    out << r.scenario_id << ',' << r.planner_id << ',' << to_string(r.status) << ',';
    if (r.cost) {
      out << fixed(r.cost->total, 6) << ',' << fixed(r.cost->j_jerk, 6) << ',' << fixed(r.cost->j_sr, 6) << ','
          << fixed(r.cost->j_dist, 6) << ',' << fixed(r.cost->j_lc, 6) << ',';
    } else {
      out << ",,,,,";
    }
    out << (record_wall_time ? fixed(r.wall_time_s, 3) : "0") << '\n';
  }
  return out.str();
}

std::vector<ScenarioResult> parse_results_csv(std::string_view text) {
  std::vector<ScenarioResult> out;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || split(line, ',') != split(kResultsHeader, ',')) {
    throw InputError("results csv: unexpected header");
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line, ',');
    if (f.size() != 9) throw InputError("results csv line " + std::to_string(lineno) + ": expected 9 fields");
    ScenarioResult r;
    r.scenario_id = f[0];
    r.planner_id = f[1];
    r.status = parse_run_status(f[2]);
    try {
      if (!f[3].empty()) r.cost = CostBreakdown{std::stod(f[4]), std::stod(f[5]), std::stod(f[6]), std::stod(f[7]),
                                                std::stod(f[3])};
      r.wall_time_s = f[8].empty() ? 0.0 : std::stod(f[8]);
    } catch (const std::logic_error&) {
      throw InputError("results csv line " + std::to_string(lineno) + ": malformed number");
    }
    if ((r.status == RunStatus::kSolved) != r.cost.has_value()) {
      throw InputError("results csv line " + std::to_string(lineno) + ": cost must be present iff solved");
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string emit_cost_plot(const std::vector<ScenarioResult>& results) {
  std::set<std::string> planners;
  std::map<std::string, std::map<std::string, double>> costs;
  for (const auto& r : results) {
    planners.insert(r.planner_id);
    if (r.status == RunStatus::kSolved && r.cost) costs[r.scenario_id][r.planner_id] = r.cost->total;
  }
  std::vector<std::string> common;
  for (const auto& [id, per] : costs) {
    if (per.size() == planners.size()) common.push_back(id);
  }
  if (common.empty()) throw std::invalid_argument("emit_cost_plot: no scenario is solved by every planner");

  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
  const double bar_w = 18.0, group_gap = 24.0, left = 70.0, top = 40.0, plot_h = 300.0, bottom = 150.0;
  const double group_w = bar_w * planners.size() + group_gap;
  const double width = left + group_w * common.size() + 20.0;
  const double height = top + plot_h + bottom;
  double max_cost = 0.0;
  for (const auto& id : common) {
    for (const auto& [p, c] : costs[id]) max_cost = std::max(max_cost, c);
  }
  const double scale = max_cost > 0.0 ? plot_h / max_cost : 0.0;
  const double base = top + plot_h;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
      << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0) << ' ' << fixed(height, 0) << "\">\n";
  svg << "  <rect x=\"0\" y=\"0\" width=\"" << fixed(width, 0) << "\" height=\"" << fixed(height, 0)
      << "\" fill=\"white\"/>\n";
  svg << "  <text x=\"" << fixed(left, 1) << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">Total cost per scenario</text>\n";
  svg << "  <line x1=\"" << fixed(left, 1) << "\" y1=\"" << fixed(base, 1) << "\" x2=\"" << fixed(width - 10.0, 1)
      << "\" y2=\"" << fixed(base, 1) << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << fixed(left, 1) << "\" y1=\"" << fixed(top, 1) << "\" x2=\"" << fixed(left, 1)
      << "\" y2=\"" << fixed(base, 1) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = max_cost * i / 4.0;
    const double y = base - v * scale;
    svg << "  <text x=\"" << fixed(left - 6.0, 1) << "\" y=\"" << fixed(y + 4.0, 1)
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" << fixed(v, 2) << "</text>\n";
  }
  for (std::size_t g = 0; g < common.size(); ++g) {
    const double gx = left + group_gap / 2.0 + g * group_w;
    std::size_t pi = 0;
    svg << "  <g class=\"group\" data-scenario=\"" << xml_escape(common[g]) << "\">\n";
    for (const auto& p : planners) {
      const double c = costs[common[g]][p];
      const double h = c * scale;
      svg << "    <rect class=\"bar\" data-planner=\"" << xml_escape(p) << "\" data-cost=\"" << fixed(c, 6)
          << "\" x=\"" << fixed(gx + pi * bar_w, 3) << "\" y=\"" << fixed(base - h, 6) << "\" width=\""
          << fixed(bar_w - 2.0, 3) << "\" height=\"" << fixed(h, 6) << "\" fill=\"" << palette[pi % 6] << "\"/>\n";
      ++pi;
    }
    const double lx = gx + bar_w * planners.size() / 2.0;
    svg << "    <text x=\"" << fixed(lx, 1) << "\" y=\"" << fixed(base + 10.0, 1) << "\" transform=\"rotate(60 "
        << fixed(lx, 1) << ' ' << fixed(base + 10.0, 1)
        << ")\" font-family=\"sans-serif\" font-size=\"10\">" << xml_escape(common[g]) << "</text>\n";
    svg << "  </g>\n";
  }
  std::size_t pi = 0;
  for (const auto& p : planners) {
    const double lx = width - 140.0;
    const double ly = 14.0 + 14.0 * pi;
    svg << "  <rect class=\"legend\" x=\"" << fixed(lx, 1) << "\" y=\"" << fixed(ly - 9.0, 1)
        << "\" width=\"10\" height=\"10\" fill=\"" << palette[pi % 6] << "\"/>\n";
    svg << "  <text x=\"" << fixed(lx + 14.0, 1) << "\" y=\"" << fixed(ly, 1)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(p) << "</text>\n";
    ++pi;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace crplan
