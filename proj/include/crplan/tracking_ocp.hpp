#pragma once

#include <array>
#include <span>
#include <vector>

#include "crplan/corridor.hpp"
#include "crplan/deadline.hpp"
#include "crplan/vehicle.hpp"

namespace crplan {

struct OcpSettings {
  int max_iter = 200;
  /// Stop when the projected-gradient step is below tol (max norm).
  double tol = 1e-6;
  std::array<double, 2> q_diag{1.0, 1.0};
  std::array<double, 2> r_diag{0.01, 0.01};
  double fd_step = 1e-6;
};

struct OcpSolution {
  /// Rollout of the optimized inputs; inputs are the effective ones.
  Trajectory trajectory;
  double objective = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Position tracking error against points 1..N plus input effort over inputs 0..N-1.
double tracking_objective(const ReferenceTrajectory& ref, const Trajectory& traj, const OcpSettings& s);

/// Pure-pursuit steering with velocity tracking, a starting guess for the solver.
std::vector<ControlInput> pursuit_inputs(const ReferenceTrajectory& ref, const VehicleState& x0,
                                         const VehicleParameters& p);

/**
 * Projected-gradient single shooting on the RK4-discretized kinematic
 * single-track model. Gradients are forward differences; steps use a
 * Barzilai-Borwein guess followed by Armijo backtracking. Starts from the
 * better of zero input, the pursuit guess and the optional warm start.
 * Throws std::runtime_error on a non-finite objective.
 */
OcpSolution solve_tracking_ocp(const ReferenceTrajectory& ref, const VehicleState& x0, const VehicleParameters& p,
                               const OcpSettings& settings, std::span<const ControlInput> warm_start = {},
                               const Deadline& deadline = {});

}  // namespace crplan
