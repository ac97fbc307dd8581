#include "crplan/tracking_ocp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crplan {

namespace {

double stage_position(const VehicleState& x, const Vec2& z, const OcpSettings& s) {
  const double ex = x.x - z.x();
  const double ey = x.y - z.y();
  return s.q_diag[0] * ex * ex + s.q_diag[1] * ey * ey;
}

double stage_input(const ControlInput& u, const OcpSettings& s) {
  return s.r_diag[0] * u.v_delta * u.v_delta + s.r_diag[1] * u.a * u.a;
}

/// Rollout with admissible inputs; per-step costs are kept for prefix reuse.
struct Shot {
  std::vector<VehicleState> states;
  std::vector<ControlInput> effective;
  /// cost[i] = input cost of step i plus position cost of state i + 1.
  std::vector<double> cost;
  double total = 0.0;
};

class Problem {
 public:
  Problem(const ReferenceTrajectory& ref, const VehicleState& x0, const VehicleParameters& p, const OcpSettings& s)
      : ref_(ref), x0_(x0), p_(p), s_(s), n_(ref.points.size() - 1) {}

  std::size_t horizon() const { return n_; }

  Shot shoot(const std::vector<ControlInput>& u) const {
    Shot out;
    out.states.reserve(n_ + 1);
    out.states.push_back(x0_);
    for (std::size_t i = 0; i < n_; ++i) {
      const ControlInput e = admissible_input(out.states.back(), u[i], ref_.dt, p_);
      out.effective.push_back(e);
      out.states.push_back(integrate_step(out.states.back(), e, ref_.dt, p_));
      out.cost.push_back(stage_input(e, s_) + stage_position(out.states.back(), ref_.points[i + 1], s_));
      out.total += out.cost.back();
    }
    return out;
  }

  /// Objective when only u[i] is replaced by ui, reusing the prefix of base.
  double perturbed(const Shot& base, const std::vector<ControlInput>& u, std::size_t i, const ControlInput& ui,
                   double prefix) const {
    double total = prefix;
    VehicleState x = base.states[i];
    for (std::size_t j = i; j < n_; ++j) {
      const ControlInput e = admissible_input(x, j == i ? ui : u[j], ref_.dt, p_);
      x = integrate_step(x, e, ref_.dt, p_);
      total += stage_input(e, s_) + stage_position(x, ref_.points[j + 1], s_);
    }
    return total;
  }

  std::vector<double> gradient(const Shot& base, const std::vector<ControlInput>& u) const {
    std::vector<double> g(2 * n_, 0.0);
    double prefix = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (int ch = 0; ch < 2; ++ch) {
        ControlInput ui = u[i];
        double& comp = ch == 0 ? ui.v_delta : ui.a;
        const double hi = ch == 0 ? p_.v_delta_max : p_.a_max;
        const double h = s_.fd_step * std::max(1.0, std::abs(comp));
        const double sign = comp + h > hi ? -1.0 : 1.0;
        comp += sign * h;
        g[2 * i + ch] = sign * (perturbed(base, u, i, ui, prefix) - base.total) / h;
      }
      prefix += base.cost[i];
    }
    return g;
  }

  void project(std::vector<ControlInput>& u) const {
    for (auto& ui : u) {
      ui.v_delta = std::clamp(ui.v_delta, -p_.v_delta_max, p_.v_delta_max);
      ui.a = std::clamp(ui.a, -p_.a_max, p_.a_max);
    }
  }

 private:
  const ReferenceTrajectory& ref_;
  VehicleState x0_;
  const VehicleParameters& p_;
  const OcpSettings& s_;
  std::size_t n_;
};

std::vector<ControlInput> step_along(const std::vector<ControlInput>& u, const std::vector<double>& g, double alpha) {
  std::vector<ControlInput> out = u;
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i].v_delta -= alpha * g[2 * i];
    out[i].a -= alpha * g[2 * i + 1];
  }
  return out;
}

double diff_dot(const std::vector<ControlInput>& a, const std::vector<ControlInput>& b,
                const std::vector<ControlInput>& c, const std::vector<ControlInput>& d) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += (a[i].v_delta - b[i].v_delta) * (c[i].v_delta - d[i].v_delta) + (a[i].a - b[i].a) * (c[i].a - d[i].a);
  }
  return sum;
}

double max_diff(const std::vector<ControlInput>& a, const std::vector<ControlInput>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max({m, std::abs(a[i].v_delta - b[i].v_delta), std::abs(a[i].a - b[i].a)});
  }
  return m;
}

}  // namespace

double tracking_objective(const ReferenceTrajectory& ref, const Trajectory& traj, const OcpSettings& s) {
  double total = 0.0;
  for (std::size_t i = 1; i < ref.points.size() && i < traj.states.size(); ++i) {
    total += stage_position(traj.states[i], ref.points[i], s);
  }
  for (std::size_t i = 0; i + 1 < ref.points.size() && i < traj.inputs.size(); ++i) {
    total += stage_input(traj.inputs[i], s);
  }
  return total;
}

std::vector<ControlInput> pursuit_inputs(const ReferenceTrajectory& ref, const VehicleState& x0,
                                         const VehicleParameters& p) {
  const std::size_t n = ref.points.size() - 1;
  const double dt = ref.dt;
  std::vector<ControlInput> out;
  VehicleState x = x0;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 pos = x.position();
    const double lookahead = std::max(4.0, 0.6 * x.v);
    std::size_t j = k + 1;
    while (j < n && (ref.points[j] - pos).norm() < lookahead) ++j;
    const Vec2 to = ref.points[j] - pos;
    const double alpha = wrap_angle(std::atan2(to.y(), to.x()) - x.psi);
    const double ld = std::max(to.norm(), 1e-3);
    const double delta_des = std::atan(p.wheelbase * 2.0 * std::sin(alpha) / ld);

    const double v_ref = (ref.points[k + 1] - ref.points[k]).norm() / dt;
    const Vec2 heading{std::cos(x.psi), std::sin(x.psi)};
    const double along_error = (ref.points[k] - pos).dot(heading);
    const double v_target = std::max(0.0, v_ref + 0.5 * along_error);

    ControlInput u{(delta_des - x.delta) / dt, (v_target - x.v) / dt};
    u = admissible_input(x, u, dt, p);
    out.push_back(u);
    x = integrate_step(x, u, dt, p);
  }
  return out;
}

OcpSolution solve_tracking_ocp(const ReferenceTrajectory& ref, const VehicleState& x0, const VehicleParameters& p,
                               const OcpSettings& settings, std::span<const ControlInput> warm_start,
                               const Deadline& deadline) {
  if (ref.points.empty()) throw std::invalid_argument("solve_tracking_ocp: empty reference");
  Problem prob(ref, x0, p, settings);
  const std::size_t n = prob.horizon();

  std::vector<ControlInput> u(n);
  Shot shot = prob.shoot(u);
  auto consider = [&](std::vector<ControlInput> cand) {
    if (cand.size() != n) return;
    prob.project(cand);
    Shot s = prob.shoot(cand);
    if (s.total < shot.total) {
      u = std::move(cand);
      shot = std::move(s);
    }
  };
  consider(pursuit_inputs(ref, x0, p));
  consider(std::vector<ControlInput>(warm_start.begin(), warm_start.end()));
  if (!std::isfinite(shot.total)) throw std::runtime_error("solve_tracking_ocp: non-finite objective");

  OcpSolution sol;
  std::vector<double> g = prob.gradient(shot, u);
  std::vector<ControlInput> u_prev;
  std::vector<double> g_prev;
  double alpha = 1e-3;
  constexpr double sigma = 1e-4;

  for (int it = 0; it < settings.max_iter && n > 0; ++it) {
    deadline.check();
    sol.iterations = it + 1;

    std::vector<ControlInput> unit = step_along(u, g, 1.0);
    prob.project(unit);
    if (max_diff(unit, u) <= settings.tol) {
      sol.converged = true;
      break;
    }

    if (!u_prev.empty()) {
      std::vector<ControlInput> gu(n), gp(n);
      for (std::size_t i = 0; i < n; ++i) {
        gu[i] = {g[2 * i], g[2 * i + 1]};
        gp[i] = {g_prev[2 * i], g_prev[2 * i + 1]};
      }
      const double ss = diff_dot(u, u_prev, u, u_prev);
      const double sy = diff_dot(u, u_prev, gu, gp);
      if (sy > 0.0) alpha = std::clamp(ss / sy, 1e-10, 1e4);
    }

    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      std::vector<ControlInput> cand = step_along(u, g, alpha);
      prob.project(cand);
      const double dist2 = diff_dot(cand, u, cand, u);
      if (dist2 == 0.0) break;
      Shot s = prob.shoot(cand);
      if (std::isfinite(s.total) && s.total <= shot.total - sigma / alpha * dist2) {
        u_prev = std::move(u);
        g_prev = std::move(g);
        u = std::move(cand);
        shot = std::move(s);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      sol.converged = true;
      break;
    }
    g = prob.gradient(shot, u);
  }

  if (!std::isfinite(shot.total)) throw std::runtime_error("solve_tracking_ocp: non-finite objective");
  sol.trajectory.dt = ref.dt;
  sol.trajectory.states = std::move(shot.states);
  sol.trajectory.inputs = std::move(shot.effective);
  sol.objective = shot.total;
  return sol;
}

}  // namespace crplan
