#pragma once

#include <optional>
#include <span>
#include <vector>

#include "crplan/scenario.hpp"

namespace crplan {

struct StateDerivative {
  double dx = 0.0;
  double dy = 0.0;
  double ddelta = 0.0;
  double dv = 0.0;
  double dpsi = 0.0;
};

/// Time-discrete trajectory; inputs[k] is held over [t_k, t_k + dt).
struct Trajectory {
  double dt = 0.1;
  std::vector<VehicleState> states;
  std::vector<ControlInput> inputs;
};

/// Applies the input limits of the kinematic single-track model at state s.
ControlInput saturate_input(const VehicleState& s, const ControlInput& u, const VehicleParameters& p);

/**
 * Kinematic single-track model:
 *   x' = v cos(psi), y' = v sin(psi), delta' = v_delta, v' = a, psi' = v tan(delta) / l_wb,
 * evaluated after input saturation.
 */
StateDerivative ks_derivative(const VehicleState& s, const ControlInput& u, const VehicleParameters& p);

/// One classical RK4 step with u held constant.
VehicleState integrate_step(const VehicleState& s, const ControlInput& u, double dt, const VehicleParameters& p);

/// Clamps u so that no limit becomes active anywhere inside the next step.
ControlInput admissible_input(const VehicleState& s, const ControlInput& u, double dt, const VehicleParameters& p);

Trajectory rollout(const VehicleState& x0, std::span<const ControlInput> inputs, double dt,
                   const VehicleParameters& p);

/// Max-norm distance between two states with the heading difference wrapped.
double state_distance(const VehicleState& a, const VehicleState& b);

struct InputReconstruction {
  std::vector<ControlInput> inputs;
  std::vector<double> residuals;
  bool feasible = true;
  /// Step index of the first bound or residual violation.
  std::optional<int> first_violation;
};

/// Finite-difference inputs per step and their one-step integration residuals.
InputReconstruction reconstruct_inputs(std::span<const VehicleState> states, double dt, const VehicleParameters& p,
                                       double tol = 1e-3);

}  // namespace crplan
