#pragma once

#include <array>
#include <optional>
#include <vector>

#include "crplan/curvilinear.hpp"
#include "crplan/vehicle.hpp"

namespace crplan {

struct FrenetState {
  double s = 0.0;
  double s_dot = 0.0;
  double s_ddot = 0.0;
  double d = 0.0;
  double d_dot = 0.0;
  double d_ddot = 0.0;
};

/// c[0] + c[1] t + ... + c[5] t^5.
struct QuinticPolynomial {
  std::array<double, 6> c{};
  double value(double t) const;
  double first(double t) const;
  double second(double t) const;
  double third(double t) const;
};

/// c[0] + c[1] t + ... + c[4] t^4.
struct QuarticPolynomial {
  std::array<double, 5> c{};
  double value(double t) const;
  double first(double t) const;
  double second(double t) const;
  double third(double t) const;
};

struct PolynomialPair {
  QuinticPolynomial lateral;
  QuarticPolynomial longitudinal;
  double duration = 0.0;
};

struct SamplingScheme {
  std::vector<double> d_targets;
  std::vector<double> v_targets;
  std::vector<double> t_targets;

  /// Throws std::invalid_argument on an empty list or a nonpositive duration.
  void validate() const;
};

struct TerminalState {
  FrenetState state;
  double duration = 0.0;
};

/// Cartesian product of the scheme lists in (d, v, t) order; terminal s is left free.
std::vector<TerminalState> sample_terminal_states(const FrenetState& cur, const SamplingScheme& scheme);

/// Throws std::invalid_argument when T is not positive.
QuinticPolynomial fit_quintic(double x0, double v0, double a0, double x1, double v1, double a1, double T);
/// Position, velocity, acceleration at 0; velocity and acceleration at T.
QuarticPolynomial fit_quartic(double x0, double v0, double a0, double v1, double a1, double T);

PolynomialPair fit_polynomials(const FrenetState& start, const FrenetState& end, double T);

/// Cartesian samples of a Frenet trajectory at dt spacing, with per-step path curvature and acceleration.
struct CartesianSample {
  Trajectory trajectory;
  std::vector<double> curvature;
  std::vector<double> acceleration;
};

/// Frenet state of a vehicle state; accelerations are taken from the arguments.
FrenetState to_frenet(const VehicleState& x, const CurvilinearFrame& frame, double s_ddot = 0.0,
                      double d_ddot = 0.0);

/**
 * Converts the polynomial pair to a KS-state trajectory: positions through the
 * frame, heading and speed from the Cartesian velocity, steering from the path
 * curvature, inputs by finite differences. nullopt if a sample leaves the
 * frame domain.
 */
std::optional<CartesianSample> to_cartesian_sample(const PolynomialPair& polys, const CurvilinearFrame& frame,
                                                   double dt, const VehicleParameters& p);

}  // namespace crplan
