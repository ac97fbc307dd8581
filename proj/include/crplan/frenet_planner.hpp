#pragma once

#include <limits>
#include <string>
#include <vector>

#include "crplan/deadline.hpp"
#include "crplan/frenet.hpp"
#include "crplan/planning.hpp"
#include "crplan/road_index.hpp"

namespace crplan {

enum class RejectReason { kNone, kFrame, kKinematics, kCollision, kRoad };

std::string to_string(RejectReason r);

struct SampleWeights {
  double jerk = 0.01;
  double lane_center = 8.0;
  double velocity = 1.0;
  double proximity = 5.0;
  double w_dist = 0.2;
};

struct TrajectorySample {
  std::size_t index = 0;
  PolynomialPair polys;
  /// Geometric conversion of the polynomials.
  Trajectory cartesian;
  /// The conversion replayed through the vehicle model from the actual start state.
  Trajectory executed;
  bool feasible = false;
  RejectReason reason = RejectReason::kNone;
  double cost = std::numeric_limits<double>::infinity();
};

/// Everything a sample evaluation reads; evaluation itself is a pure function of this and the sample.
struct SampleContext {
  const Scenario* scenario = nullptr;
  const RoadIndex* road = nullptr;
  const CurvilinearFrame* frame = nullptr;
  VehicleParameters params;
  VehicleState start;
  /// Scenario time step of the sample's first state.
  int start_step = 0;
  double v_desired = 13.0;
  SampleWeights weights;
  /// Extra clearance added around the ego box in the collision filter.
  double collision_margin = 0.2;
  /// Largest allowed distance between a sample and its replay.
  double max_replay_error = 0.3;
};

/// Filters and scores one sample in place.
void evaluate_sample(TrajectorySample& sample, const SampleContext& ctx);

/**
 * Evaluates every sample (on up to `threads` threads) and returns the
 * feasible ones by ascending cost, ties broken by sample index.
 */
std::vector<TrajectorySample> evaluate_samples(std::vector<TrajectorySample>& samples, const SampleContext& ctx,
                                               int threads = 1);

/// Builds unevaluated samples for every terminal state of the scheme.
std::vector<TrajectorySample> generate_samples(const FrenetState& cur, const SamplingScheme& scheme);

SamplingScheme default_scheme(double v_desired);

struct FrenetConfig {
  std::vector<double> d_targets{-3.0, -1.5, 0.0, 1.5, 3.0};
  std::vector<double> v_targets_frac{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> t_targets{2.0, 3.0, 4.0};
  double v_desired = 13.0;
  SampleWeights weights;
  int replan_stride = 5;
  int threads = 1;
  double collision_margin = 0.2;

  SamplingScheme scheme() const;
  /// Stronger braking: velocity targets at or below the current speed, shorter durations included.
  SamplingScheme emergency_scheme(double current_speed) const;
};

/// Best sample from the nominal scheme, retried once with the emergency scheme. nullopt if both are empty.
std::optional<TrajectorySample> plan_step(const FrenetState& cur, const SampleContext& ctx, const FrenetConfig& cfg);

/// One planning cycle from the problem's initial state; the trajectory is the best sample as executed.
PlanResult plan_frenet_segment(const Scenario& sc, const VehicleParameters& p, const FrenetConfig& cfg,
                               const Deadline& deadline = {});

/**
 * Receding-horizon loop: execute replan_stride steps of each plan, replan from
 * the reached state, stop on goal, horizon exhaustion or failure.
 */
PlanResult run_receding_horizon(const Scenario& sc, const VehicleParameters& p, const FrenetConfig& cfg,
                                const Deadline& deadline = {});

}  // namespace crplan
