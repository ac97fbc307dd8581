// Command-line front end: plan, check, evaluate, benchmark, plot.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "crplan/harness.hpp"
#include "crplan/routing.hpp"
#include "crplan/scenario_io.hpp"

namespace {

using namespace crplan;
using nlohmann::json;

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kNoSolution = 3 };

PlannerConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  return parse_planner_config(read_text_file(path));
}

Trajectory load_solution(const std::string& path, const Scenario& sc) {
  const Solution sol = parse_solution(read_text_file(path));
  if (!sol.scenario_id.empty() && !sc.id.empty() && sol.scenario_id != sc.id) {
    std::cerr << "warning: solution was produced for scenario '" << sol.scenario_id << "'\n";
  }
  Trajectory t;
  t.dt = sol.dt;
  t.states = sol.states;
  t.inputs = sol.inputs;
  return t;
}

json report_json(const FeasibilityReport& r) {
  json j{{"feasible", r.feasible()},
         {"collision_free", r.collision_free},
         {"kinematically_feasible", r.kinematically_feasible},
         {"road_compliant", r.road_compliant}};
  if (r.first_violation) {
    j["first_violation"] = {{"condition", to_string(r.first_violation->condition)}, {"step", r.first_violation->step}};
  } else {
    j["first_violation"] = nullptr;
  }
  return j;
}

json cost_json(const CostBreakdown& c) {
  return json{{"j_jerk", c.j_jerk}, {"j_sr", c.j_sr}, {"j_dist", c.j_dist}, {"j_lc", c.j_lc}, {"total", c.total}};
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Motion planning benchmark: reachability and Frenet sampling planners"};
  app.require_subcommand(1);

  std::string scenario_path, planner = "reach", config_path, out_path, solution_path;
  auto* plan = app.add_subcommand("plan", "Plan one scenario and write a solution file");
  plan->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  plan->add_option("--planner", planner, "reach or frenet")->check(CLI::IsMember(planner_ids()));
  plan->add_option("--config", config_path, "Planner config JSON");
  plan->add_option("--out", out_path, "Solution JSON to write")->required();

  auto* check = app.add_subcommand("check", "Run the drivability checks on a solution");
  check->add_option("--scenario", scenario_path)->required();
  check->add_option("--solution", solution_path)->required();
  check->add_option("--config", config_path, "Config providing vehicle parameters");

  auto* evaluate = app.add_subcommand("evaluate", "Print the cost breakdown of a solution");
  evaluate->add_option("--scenario", scenario_path)->required();
  evaluate->add_option("--solution", solution_path)->required();
  evaluate->add_option("--config", config_path, "Config providing vehicle parameters");

  std::string dir, planners = "reach,frenet", leaderboard_path, results_path, plot_path;
  double budget = 60.0;
  int workers = 2;
  bool reactive = false, wall_time = false;
  auto* bench = app.add_subcommand("benchmark", "Run planners over a scenario directory");
  bench->add_option("--dir", dir, "Scenario directory")->required();
  bench->add_option("--planners", planners, "Comma-separated planner ids");
  bench->add_option("--budget-s", budget, "Per-run time budget in seconds")->check(CLI::NonNegativeNumber);
  bench->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--out", leaderboard_path, "Leaderboard CSV")->required();
  bench->add_option("--results", results_path, "Per-run results CSV")->required();
  bench->add_option("--plot", plot_path, "Also write the cost plot SVG");
  bench->add_option("--config", config_path, "Planner config JSON");
  bench->add_flag("--reactive", reactive, "Closed loop against IDM-driven obstacles");
  bench->add_flag("--wall-time", wall_time, "Write measured wall times instead of 0");

  auto* plot = app.add_subcommand("plot", "Cost comparison chart from a results CSV");
  plot->add_option("--results", results_path)->required();
  plot->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (plan->parsed()) {
      const Scenario sc = load_scenario(scenario_path);
      const PlannerConfig cfg = load_config(config_path);
      const PlanResult res = run_planner(planner, sc, cfg, Deadline{});
      if (!res.ok()) {
        std::cerr << "no solution: " << res.message << "\n";
        return kNoSolution;
      }
      write_text_file(out_path, serialize_solution(Solution{sc.id, planner, res.trajectory->dt,
                                                            res.trajectory->states, res.trajectory->inputs}));
      return kOk;
    }
    if (check->parsed()) {
      const Scenario sc = load_scenario(scenario_path);
      const PlannerConfig cfg = load_config(config_path);
      const Trajectory traj = load_solution(solution_path, sc);
      const RoadIndex road(sc.network);
      const FeasibilityReport rep = check_feasibility(traj, sc, road, cfg.vehicle);
      json out = report_json(rep);
      out["goal_reached"] = first_goal_step(traj, sc).has_value();
      std::cout << out.dump(2) << "\n";
      return rep.feasible() ? kOk : kNoSolution;
    }
    if (evaluate->parsed()) {
      const Scenario sc = load_scenario(scenario_path);
      const PlannerConfig cfg = load_config(config_path);
      const Trajectory traj = load_solution(solution_path, sc);
      const RoadIndex road(sc.network);
      const CurvilinearFrame frame = build_reference_frame(road, sc.problem);
      std::cout << cost_json(evaluate_cost(traj, sc, road, frame, cfg.vehicle)).dump(2) << "\n";
      return kOk;
    }
    if (bench->parsed()) {
      HarnessConfig hc;
      hc.planners = load_config(config_path);
      hc.budget_s = budget;
      hc.workers = workers;
      hc.reactive = reactive;
      const auto ids = split_list(planners);
      for (const auto& id : ids) {
        const auto& known = planner_ids();
        if (std::find(known.begin(), known.end(), id) == known.end()) {
          std::cerr << "unknown planner '" << id << "'\n";
          return kUsage;
        }
      }
      const auto scenarios = load_corpus(dir);
      const auto results = run_benchmark(scenarios, ids, hc);
      write_text_file(results_path, format_results_csv(results, wall_time));
      write_text_file(leaderboard_path, format_leaderboard_csv(build_leaderboard(results)));
      if (!plot_path.empty()) write_text_file(plot_path, emit_cost_plot(results));
      for (const auto& r : results) {
        std::cerr << r.scenario_id << " " << r.planner_id << " " << to_string(r.status) << " (" << r.message << ")\n";
      }
      return kOk;
    }
    if (plot->parsed()) {
      const auto results = parse_results_csv(read_text_file(results_path));
      write_text_file(out_path, emit_cost_plot(results));
      return kOk;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const GeometryError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoSolution;
  }
  return kUsage;
}
