#include "crplan/vehicle.hpp"

#include <algorithm>
#include <cmath>

namespace crplan {

namespace {

constexpr double kVelocityEps = 1e-6;

double accel_cap(double v, const VehicleParameters& p) {
  if (!p.power_limit) return p.a_max;
  return p.a_max * std::min(1.0, p.v_switch / std::max(v, kVelocityEps));
}

}  // namespace

ControlInput saturate_input(const VehicleState& s, const ControlInput& u, const VehicleParameters& p) {
  ControlInput out = u;
  out.v_delta = std::clamp(out.v_delta, -p.v_delta_max, p.v_delta_max);
  if ((s.delta >= p.delta_max && out.v_delta > 0.0) || (s.delta <= -p.delta_max && out.v_delta < 0.0)) {
    out.v_delta = 0.0;
  }
  out.a = std::clamp(out.a, -p.a_max, out.a > 0.0 ? accel_cap(s.v, p) : p.a_max);
  return out;
}

StateDerivative ks_derivative(const VehicleState& s, const ControlInput& u, const VehicleParameters& p) {
  const ControlInput su = saturate_input(s, u, p);
  const double delta = std::clamp(s.delta, -p.delta_max, p.delta_max);
  return StateDerivative{s.v * std::cos(s.psi), s.v * std::sin(s.psi), su.v_delta, su.a,
                         s.v * std::tan(delta) / p.wheelbase};
}

namespace {

VehicleState advance(const VehicleState& s, const StateDerivative& d, double h) {
  return VehicleState{s.x + h * d.dx, s.y + h * d.dy, s.delta + h * d.ddelta, s.v + h * d.dv, s.psi + h * d.dpsi};
}

}  // namespace

VehicleState integrate_step(const VehicleState& s, const ControlInput& u, double dt, const VehicleParameters& p) {
  const StateDerivative k1 = ks_derivative(s, u, p);
  const StateDerivative k2 = ks_derivative(advance(s, k1, 0.5 * dt), u, p);
  const StateDerivative k3 = ks_derivative(advance(s, k2, 0.5 * dt), u, p);
  const StateDerivative k4 = ks_derivative(advance(s, k3, dt), u, p);
  const double w = dt / 6.0;
  return VehicleState{s.x + w * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
                      s.y + w * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy),
                      s.delta + w * (k1.ddelta + 2.0 * k2.ddelta + 2.0 * k3.ddelta + k4.ddelta),
                      s.v + w * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv),
                      s.psi + w * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi)};
}

ControlInput admissible_input(const VehicleState& s, const ControlInput& u, double dt, const VehicleParameters& p) {
  ControlInput out;
  const double vd_hi = std::min(p.v_delta_max, (p.delta_max - s.delta) / dt);
  const double vd_lo = std::max(-p.v_delta_max, (-p.delta_max - s.delta) / dt);
  out.v_delta = vd_hi >= vd_lo ? std::clamp(u.v_delta, vd_lo, vd_hi) : 0.0;

  double a_hi = p.a_max;
  if (p.power_limit && s.v + p.a_max * dt > p.v_switch) {
    // Largest a with a·(v + a·dt) <= a_max·v_switch, the tightest stage of the step.
    const double v = std::max(s.v, 0.0);
    const double root = (-v + std::sqrt(v * v + 4.0 * dt * p.a_max * p.v_switch)) / (2.0 * dt);
    a_hi = std::min(a_hi, root * (1.0 - 1e-12));
  }
  out.a = std::clamp(u.a, -p.a_max, std::max(a_hi, 0.0));
  return out;
}

Trajectory rollout(const VehicleState& x0, std::span<const ControlInput> inputs, double dt,
                   const VehicleParameters& p) {
  Trajectory traj;
  traj.dt = dt;
  traj.states.reserve(inputs.size() + 1);
  traj.states.push_back(x0);
  for (const auto& u : inputs) traj.states.push_back(integrate_step(traj.states.back(), u, dt, p));
  traj.inputs.assign(inputs.begin(), inputs.end());
  return traj;
}

double state_distance(const VehicleState& a, const VehicleState& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.delta - b.delta), std::abs(a.v - b.v),
                   std::abs(wrap_angle(a.psi - b.psi))});
}

InputReconstruction reconstruct_inputs(std::span<const VehicleState> states, double dt, const VehicleParameters& p,
                                       double tol) {
  constexpr double bound_tol = 1e-9;
  InputReconstruction out;
  auto mark = [&](int k) {
    out.feasible = false;
    if (!out.first_violation) out.first_violation = k;
  };
  for (std::size_t k = 0; k + 1 < states.size(); ++k) {
    const VehicleState& s0 = states[k];
    const VehicleState& s1 = states[k + 1];
    const ControlInput u{(s1.delta - s0.delta) / dt, (s1.v - s0.v) / dt};
    out.inputs.push_back(u);
    const double r = state_distance(integrate_step(s0, u, dt, p), s1);
    out.residuals.push_back(r);

    bool ok = std::abs(u.v_delta) <= p.v_delta_max + bound_tol && u.a >= -p.a_max - bound_tol &&
              u.a <= p.a_max + bound_tol && std::abs(s0.delta) <= p.delta_max + bound_tol &&
              std::abs(s1.delta) <= p.delta_max + bound_tol;
    if (ok && p.power_limit && u.a > 0.0 && s1.v > p.v_switch) {
      ok = u.a * s1.v <= p.a_max * p.v_switch * (1.0 + 1e-9);
    }
    if (!ok || !(r <= tol)) mark(static_cast<int>(k));
  }
  return out;
}

}  // namespace crplan
