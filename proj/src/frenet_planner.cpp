#include "crplan/frenet_planner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "crplan/drivability.hpp"
#include "crplan/routing.hpp"

namespace crplan {

std::string to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kNone:
      return "none";
    case RejectReason::kFrame:
      return "frame";
    case RejectReason::kKinematics:
      return "kinematics";
    case RejectReason::kCollision:
      return "collision";
    case RejectReason::kRoad:
      return "road";
  }
  return "unknown";
}

namespace {

bool geometric_kinematics_ok(const CartesianSample& cs, const VehicleParameters& p) {
  constexpr double tol = 1e-9;
  const double kappa_max = std::tan(p.delta_max) / p.wheelbase;
  const auto& st = cs.trajectory.states;
  for (std::size_t j = 0; j < st.size(); ++j) {
    const double v = st[j].v;
    if (std::abs(cs.curvature[j]) > kappa_max + tol) return false;
    if (v < -tol || v > p.v_max + tol) return false;
    const double a = cs.acceleration[j];
    double cap = p.a_max;
    if (p.power_limit && v > p.v_switch) cap = p.a_max * p.v_switch / v;
    if (a < -p.a_max - tol || a > cap + tol) return false;
  }
  for (const auto& u : cs.trajectory.inputs) {
    if (std::abs(u.v_delta) > p.v_delta_max + tol) return false;
  }
  return true;
}

/// Tracks the planned states with a curvature feedback on lateral and heading error.
Trajectory replay(const VehicleState& x0, const Trajectory& plan, const VehicleParameters& p) {
  const double dt = plan.dt;
  Trajectory out;
  out.dt = dt;
  out.states.push_back(x0);
  VehicleState x = x0;
  for (std::size_t k = 0; k + 1 < plan.states.size(); ++k) {
    const VehicleState& ref = plan.states[k];
    const VehicleState& target = plan.states[k + 1];
    const Vec2 e = x.position() - ref.position();
    const Vec2 heading{std::cos(ref.psi), std::sin(ref.psi)};
    const double e_lon = e.dot(heading);
    const double e_lat = e.dot(left_normal(heading));
    const double e_psi = wrap_angle(x.psi - ref.psi);
    const double v = std::max(x.v, 1.0);
    const double kappa = std::tan(target.delta) / p.wheelbase - (e_lat + 2.0 * v * e_psi) / (v * v);
    const double delta_cmd = std::atan(p.wheelbase * kappa);
    const double v_cmd = std::max(0.0, target.v - 0.5 * e_lon);
    ControlInput u{(delta_cmd - x.delta) / dt, (v_cmd - x.v) / dt};
    if (x.v + u.a * dt < 0.0) u.a = -x.v / dt;
    u = admissible_input(x, u, dt, p);
    x = integrate_step(x, u, dt, p);
    out.inputs.push_back(u);
    out.states.push_back(x);
  }
  return out;
}

double replay_error(const Trajectory& a, const Trajectory& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.states.size() && k < b.states.size(); ++k) {
    m = std::max(m, (a.states[k].position() - b.states[k].position()).norm());
  }
  return m;
}

double sample_cost(const TrajectorySample& s, const SampleContext& ctx) {
  const double dt = s.executed.dt;
  const auto& w = ctx.weights;
  const std::size_t n = s.executed.states.size();
  double jerk = 0.0;
  double lateral = 0.0;
  double proximity = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double t = static_cast<double>(j) * dt;
    const double js = s.polys.longitudinal.third(t);
    jerk += js * js * dt;
    const double d = s.polys.lateral.value(t);
    lateral += d * d * dt;

    const double ego_s = s.polys.longitudinal.value(t);
    const Vec2 pos = s.executed.states[j].position();
    double worst = 0.0;
    for (const auto& o : ctx.scenario->obstacles) {
      const ObstacleState& os = o.state_at(ctx.start_step + static_cast<int>(j));
      const Vec2 center{os.x, os.y};
      const auto fo = ctx.frame->try_to_curvilinear(center);
      if (!fo || fo->s <= ego_s || std::abs(fo->d - d) >= 3.5) continue;
      const double gap = std::max(0.0, (center - pos).norm() - 0.5 * ctx.params.length - 0.5 * o.length);
      worst = std::max(worst, std::exp(-w.w_dist * gap));
    }
    proximity += worst * dt;
  }
  const double dv = s.polys.longitudinal.first(s.polys.duration) - ctx.v_desired;
  return w.jerk * jerk + w.lane_center * lateral + w.velocity * dv * dv + w.proximity * proximity;
}

}  // namespace

void evaluate_sample(TrajectorySample& sample, const SampleContext& ctx) {
  sample.feasible = false;
  sample.cost = std::numeric_limits<double>::infinity();
  const double dt = ctx.scenario->dt;
  const auto cs = to_cartesian_sample(sample.polys, *ctx.frame, dt, ctx.params);
  if (!cs) {
    sample.reason = RejectReason::kFrame;
    return;
  }
  sample.cartesian = cs->trajectory;
  if (!geometric_kinematics_ok(*cs, ctx.params)) {
    sample.reason = RejectReason::kKinematics;
    return;
  }
  sample.executed = replay(ctx.start, sample.cartesian, ctx.params);
  if (replay_error(sample.executed, sample.cartesian) > ctx.max_replay_error) {
    sample.reason = RejectReason::kKinematics;
    return;
  }
  if (!check_collision_free(sample.executed, *ctx.scenario, ctx.params, ctx.start_step, ctx.collision_margin)
           .collision_free) {
    sample.reason = RejectReason::kCollision;
    return;
  }
  if (!check_road_compliance(sample.executed, *ctx.road, ctx.params).road_compliant) {
    sample.reason = RejectReason::kRoad;
    return;
  }
  sample.cost = sample_cost(sample, ctx);
  if (!std::isfinite(sample.cost)) {
    sample.reason = RejectReason::kKinematics;
    sample.cost = std::numeric_limits<double>::infinity();
    return;
  }
  sample.reason = RejectReason::kNone;
  sample.feasible = true;
}

std::vector<TrajectorySample> evaluate_samples(std::vector<TrajectorySample>& samples, const SampleContext& ctx,
                                               int threads) {
  const std::size_t workers = std::clamp<std::size_t>(threads > 0 ? threads : 1, 1, std::max<std::size_t>(1, samples.size()));
  if (workers == 1) {
    for (auto& s : samples) evaluate_sample(s, ctx);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < samples.size(); i = next++) evaluate_sample(samples[i], ctx);
      });
    }
    for (auto& t : pool) t.join();
  }
  std::vector<TrajectorySample> ranked;
  for (const auto& s : samples) {
    if (s.feasible) ranked.push_back(s);
  }
  std::sort(ranked.begin(), ranked.end(), [](const TrajectorySample& a, const TrajectorySample& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.index < b.index;
  });
  return ranked;
}

std::vector<TrajectorySample> generate_samples(const FrenetState& cur, const SamplingScheme& scheme) {
  std::vector<TrajectorySample> out;
  for (const auto& term : sample_terminal_states(cur, scheme)) {
    TrajectorySample s;
    s.index = out.size();
    s.polys = fit_polynomials(cur, term.state, term.duration);
    out.push_back(std::move(s));
  }
  return out;
}

SamplingScheme default_scheme(double v_desired) {
  FrenetConfig cfg;
  cfg.v_desired = v_desired;
  return cfg.scheme();
}

SamplingScheme FrenetConfig::scheme() const {
  SamplingScheme s{d_targets, {}, t_targets};
  for (double f : v_targets_frac) s.v_targets.push_back(f * v_desired);
  return s;
}

SamplingScheme FrenetConfig::emergency_scheme(double current_speed) const {
  const double v = std::max(0.0, current_speed);
  return SamplingScheme{d_targets, {0.0, 0.25 * v, 0.5 * v, 0.75 * v}, {1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0}};
}

std::optional<TrajectorySample> plan_step(const FrenetState& cur, const SampleContext& ctx, const FrenetConfig& cfg) {
  auto samples = generate_samples(cur, cfg.scheme());
  auto ranked = evaluate_samples(samples, ctx, cfg.threads);
  if (ranked.empty()) {
    samples = generate_samples(cur, cfg.emergency_scheme(cur.s_dot));
    ranked = evaluate_samples(samples, ctx, cfg.threads);
  }
  if (ranked.empty()) return std::nullopt;
  return std::move(ranked.front());
}

namespace {

SampleContext make_context(const Scenario& sc, const RoadIndex& road, const CurvilinearFrame& frame,
                           const VehicleParameters& p, const FrenetConfig& cfg) {
  SampleContext ctx;
  ctx.scenario = &sc;
  ctx.road = &road;
  ctx.frame = &frame;
  ctx.params = p;
  ctx.v_desired = cfg.v_desired;
  ctx.weights = cfg.weights;
  ctx.collision_margin = cfg.collision_margin;
  ctx.start = sc.problem.initial_state;
  ctx.start_step = sc.problem.initial_time;
  return ctx;
}

/// Desired speed capped by the speed limits under the ego and the goal's velocity window.
double effective_speed(const Scenario& sc, const RoadIndex& road, const Vec2& pos, double v_desired) {
  double v = v_desired;
  for (LaneletId id : road.lanelets_containing(pos)) {
    if (const auto& lim = road.lanelet(id).speed_limit) v = std::min(v, *lim);
  }
  const GoalSpec& g = sc.problem.goal;
  if (v > g.v_hi) v = std::max(g.v_lo, g.v_hi - std::min(0.5, 0.25 * (g.v_hi - g.v_lo)));
  return v;
}

}  // namespace

PlanResult plan_frenet_segment(const Scenario& sc, const VehicleParameters& p, const FrenetConfig& cfg,
                               const Deadline& deadline) {
  deadline.check();
  const RoadIndex road(sc.network);
  const CurvilinearFrame frame = build_reference_frame(road, sc.problem);
  FrenetConfig local = cfg;
  local.v_desired = effective_speed(sc, road, sc.problem.initial_state.position(), cfg.v_desired);
  const SampleContext ctx = make_context(sc, road, frame, p, local);
  const auto best = plan_step(to_frenet(ctx.start, frame), ctx, local);
  if (!best) return {std::nullopt, "no feasible sample at step " + std::to_string(ctx.start_step)};
  return {best->executed, "sample " + std::to_string(best->index)};
}

PlanResult run_receding_horizon(const Scenario& sc, const VehicleParameters& p, const FrenetConfig& cfg,
                                const Deadline& deadline) {
  const RoadIndex road(sc.network);
  const CurvilinearFrame frame = build_reference_frame(road, sc.problem);

  SampleContext ctx = make_context(sc, road, frame, p, cfg);

  Trajectory traj;
  traj.dt = sc.dt;
  traj.states.push_back(sc.problem.initial_state);
  int k = sc.problem.initial_time;
  const int last = std::min(sc.horizon, sc.problem.goal.t_hi);
  double s_ddot = 0.0;
  double d_ddot = 0.0;
  const int stride = std::max(1, cfg.replan_stride);

  auto finish = [&]() -> PlanResult {
    const FeasibilityReport rep = check_feasibility(traj, sc, road, p);
    if (!rep.feasible()) {
      std::ostringstream msg;
      msg << "executed trajectory has a " << to_string(rep.first_violation->condition) << " violation at step "
          << rep.first_violation->step;
      return {std::nullopt, msg.str()};
    }
    return {traj, "goal reached at step " + std::to_string(k)};
  };

  if (goal_reached(traj.states.back(), k, sc.problem.goal, sc.network)) return finish();
  while (k < last) {
    deadline.check();
    ctx.start = traj.states.back();
    ctx.start_step = k;
    const FrenetState cur = to_frenet(ctx.start, frame, s_ddot, d_ddot);
    FrenetConfig local = cfg;
    local.v_desired = effective_speed(sc, road, ctx.start.position(), cfg.v_desired);
    ctx.v_desired = local.v_desired;
    const auto best = plan_step(cur, ctx, local);
    if (!best) return {std::nullopt, "no feasible sample at step " + std::to_string(k)};
    const int steps = std::min({stride, static_cast<int>(best->executed.inputs.size()), last - k});
    for (int j = 0; j < steps; ++j) {
      traj.inputs.push_back(best->executed.inputs[j]);
      traj.states.push_back(best->executed.states[j + 1]);
      ++k;
      if (goal_reached(traj.states.back(), k, sc.problem.goal, sc.network)) return finish();
    }
    const double t = steps * sc.dt;
    s_ddot = best->polys.longitudinal.second(t);
    d_ddot = best->polys.lateral.second(t);
  }
  return {std::nullopt, "horizon exhausted at step " + std::to_string(k)};
}

}  // namespace crplan
