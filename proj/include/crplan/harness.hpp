#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crplan/config_io.hpp"
#include "crplan/drivability.hpp"
#include "crplan/idm.hpp"

namespace crplan {

enum class RunStatus { kSolved, kInfeasibleOutput, kPlannerFailure, kTimeout };

std::string to_string(RunStatus s);
/// Inverse of to_string; throws InputError on unknown names.
RunStatus parse_run_status(std::string_view name);

struct ScenarioResult {
  std::string scenario_id;
  std::string planner_id;
  RunStatus status = RunStatus::kPlannerFailure;
  /// Present iff status is solved.
  std::optional<CostBreakdown> cost;
  /// The verified trajectory, present iff status is solved. Not written to CSV.
  std::optional<Trajectory> solution;
  double wall_time_s = 0.0;
  std::string message;
};

struct HarnessConfig {
  PlannerConfig planners;
  double budget_s = 60.0;
  int workers = 2;
  /// Closed loop against IDM-driven obstacles instead of the recorded predictions.
  bool reactive = false;
  /// Steps executed between two replans in reactive mode.
  int reactive_replan_steps = 10;
  IdmParams idm;
};

/// The registered planner ids.
const std::vector<std::string>& planner_ids();

/// Runs one planner under the budget on the unmodified scenario.
PlanResult run_planner(const std::string& planner_id, const Scenario& sc, const PlannerConfig& cfg,
                       const Deadline& deadline);

/**
 * Independent verification: all drivability checks plus goal_reached on the
 * given scenario. Returns solved with its cost, or infeasible-output with the
 * first failure in the message.
 */
ScenarioResult verify_trajectory(const Trajectory& traj, const Scenario& sc, const VehicleParameters& p);

/// Plans, verifies and scores one scenario. Never throws for planner-side problems.
ScenarioResult run_planner_on_scenario(const std::string& planner_id, const Scenario& sc, const HarnessConfig& cfg);

/// Every planner on every scenario on a bounded worker pool; results sorted by (scenario, planner).
std::vector<ScenarioResult> run_benchmark(const std::vector<Scenario>& scenarios,
                                          const std::vector<std::string>& planners, const HarnessConfig& cfg);

/// All *.json scenarios of a directory in file-name order.
std::vector<Scenario> load_corpus(const std::filesystem::path& dir);

struct LeaderboardEntry {
  std::string planner_id;
  int solved = 0;
  int top1 = 0;
};

/// Solved counts and lowest-total-cost awards (ties award every tied planner); sorted by (top1, solved) descending.
std::vector<LeaderboardEntry> build_leaderboard(const std::vector<ScenarioResult>& results);

std::string format_leaderboard_csv(const std::vector<LeaderboardEntry>& entries);
/// With record_wall_time false the wall_time_s column is written as 0 so repeated runs are byte-identical.
std::string format_results_csv(const std::vector<ScenarioResult>& results, bool record_wall_time = false);
std::vector<ScenarioResult> parse_results_csv(std::string_view text);

/**
 * Grouped bar chart of total cost: one group per scenario solved by every
 * planner present in the results, one bar per planner. Throws
 * std::invalid_argument when no scenario is solved by all planners.
 */
std::string emit_cost_plot(const std::vector<ScenarioResult>& results);

}  // namespace crplan
