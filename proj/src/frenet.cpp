#include "crplan/frenet.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace crplan {

double QuinticPolynomial::value(double t) const {
  return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
}
double QuinticPolynomial::first(double t) const {
  return c[1] + t * (2 * c[2] + t * (3 * c[3] + t * (4 * c[4] + t * 5 * c[5])));
}
double QuinticPolynomial::second(double t) const {
  return 2 * c[2] + t * (6 * c[3] + t * (12 * c[4] + t * 20 * c[5]));
}
double QuinticPolynomial::third(double t) const { return 6 * c[3] + t * (24 * c[4] + t * 60 * c[5]); }

double QuarticPolynomial::value(double t) const {
  return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * c[4])));
}
double QuarticPolynomial::first(double t) const { return c[1] + t * (2 * c[2] + t * (3 * c[3] + t * 4 * c[4])); }
double QuarticPolynomial::second(double t) const { return 2 * c[2] + t * (6 * c[3] + t * 12 * c[4]); }
double QuarticPolynomial::third(double t) const { return 6 * c[3] + t * 24 * c[4]; }

void SamplingScheme::validate() const {
  if (d_targets.empty() || v_targets.empty() || t_targets.empty()) {
    throw std::invalid_argument("sampling scheme: every target list must be nonempty");
  }
  for (double t : t_targets) {
    if (!(t > 0.0)) throw std::invalid_argument("sampling scheme: durations must be positive");
  }
}

std::vector<TerminalState> sample_terminal_states(const FrenetState& cur, const SamplingScheme& scheme) {
  scheme.validate();
  std::vector<TerminalState> out;
  out.reserve(scheme.d_targets.size() * scheme.v_targets.size() * scheme.t_targets.size());
  for (double d : scheme.d_targets) {
    for (double v : scheme.v_targets) {
      for (double t : scheme.t_targets) {
        FrenetState end;
        end.s = cur.s;
        end.s_dot = v;
        end.d = d;
        out.push_back({end, t});
      }
    }
  }
  return out;
}

namespace {

void require_positive(double T) {
  if (!(T > 1e-6)) throw std::invalid_argument("polynomial fit: duration must be positive");
}

}  // namespace

QuinticPolynomial fit_quintic(double x0, double v0, double a0, double x1, double v1, double a1, double T) {
  require_positive(T);
  const double t2 = T * T, t3 = t2 * T, t4 = t3 * T, t5 = t4 * T;
  Eigen::Matrix3d m;
  m << t3, t4, t5, 3 * t2, 4 * t3, 5 * t4, 6 * T, 12 * t2, 20 * t3;
  const Eigen::Vector3d rhs{x1 - (x0 + v0 * T + 0.5 * a0 * t2), v1 - (v0 + a0 * T), a1 - a0};
  const Eigen::Vector3d x = m.colPivHouseholderQr().solve(rhs);
  return QuinticPolynomial{{x0, v0, 0.5 * a0, x(0), x(1), x(2)}};
}

QuarticPolynomial fit_quartic(double x0, double v0, double a0, double v1, double a1, double T) {
  require_positive(T);
  const double t2 = T * T, t3 = t2 * T;
  Eigen::Matrix2d m;
  m << 3 * t2, 4 * t3, 6 * T, 12 * t2;
  const Eigen::Vector2d rhs{v1 - (v0 + a0 * T), a1 - a0};
  const Eigen::Vector2d x = m.colPivHouseholderQr().solve(rhs);
  return QuarticPolynomial{{x0, v0, 0.5 * a0, x(0), x(1)}};
}

PolynomialPair fit_polynomials(const FrenetState& start, const FrenetState& end, double T) {
  return PolynomialPair{fit_quintic(start.d, start.d_dot, start.d_ddot, end.d, end.d_dot, end.d_ddot, T),
                        fit_quartic(start.s, start.s_dot, start.s_ddot, end.s_dot, end.s_ddot, T), T};
}

FrenetState to_frenet(const VehicleState& x, const CurvilinearFrame& frame, double s_ddot, double d_ddot) {
  const FrenetPoint fp = frame.project_clamped(x.position());
  const double dtheta = wrap_angle(x.psi - frame.heading_at(fp.s));
  const double scale = 1.0 - frame.curvature_at(fp.s) * fp.d;
  FrenetState out;
  out.s = fp.s;
  out.d = fp.d;
  out.s_dot = x.v * std::cos(dtheta) / (std::abs(scale) > 1e-6 ? scale : 1e-6);
  out.d_dot = x.v * std::sin(dtheta);
  out.s_ddot = s_ddot;
  out.d_ddot = d_ddot;
  return out;
}

std::optional<CartesianSample> to_cartesian_sample(const PolynomialPair& polys, const CurvilinearFrame& frame,
                                                   double dt, const VehicleParameters& p) {
  const int n = static_cast<int>(std::lround(polys.duration / dt));
  CartesianSample out;
  out.trajectory.dt = dt;
  double prev_heading = 0.0;
  double prev_delta = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double t = j * dt;
    const double s = polys.longitudinal.value(t);
    const double sd = polys.longitudinal.first(t);
    const double sdd = polys.longitudinal.second(t);
    const double d = polys.lateral.value(t);
    const double dd = polys.lateral.first(t);
    const double ddd = polys.lateral.second(t);
    if (s < 0.0 || s > frame.length()) return std::nullopt;
    Vec2 pos;
    try {
      pos = frame.to_cartesian(s, d);
    } catch (const GeometryError&) {
      return std::nullopt;
    }
    const double kr = frame.curvature_at(s);
    const double dkr = frame.curvature_rate_at(s);
    // Velocity and acceleration in the moving (tangent, normal) basis of the reference.
    const double a_t = sd * (1.0 - kr * d);
    const double b_n = dd;
    const double a_t_dot = sdd * (1.0 - kr * d) - sd * (dkr * sd * d + kr * dd);
    const double acc_t = a_t_dot - b_n * kr * sd;
    const double acc_n = a_t * kr * sd + ddd;
    const double v = std::hypot(a_t, b_n);

    double heading = prev_heading;
    double kappa = 0.0;
    double accel = sdd;
    if (v > 1e-6) {
      heading = wrap_angle(frame.heading_at(s) + std::atan2(b_n, a_t));
      kappa = (a_t * acc_n - b_n * acc_t) / (v * v * v);
      accel = (a_t * acc_t + b_n * acc_n) / v;
    } else if (j == 0) {
      heading = frame.heading_at(s);
    }
    const double delta = v > 1e-6 ? std::atan(p.wheelbase * kappa) : prev_delta;
    if (j == 0 && v <= 1e-6) prev_delta = delta;

    out.trajectory.states.push_back(VehicleState{pos.x(), pos.y(), delta, v, heading});
    out.curvature.push_back(kappa);
    out.acceleration.push_back(accel);
    prev_heading = heading;
    prev_delta = delta;
  }
  auto& st = out.trajectory.states;
  for (std::size_t k = 0; k + 1 < st.size(); ++k) {
    out.trajectory.inputs.push_back({(st[k + 1].delta - st[k].delta) / dt, (st[k + 1].v - st[k].v) / dt});
  }
  return out;
}

}  // namespace crplan
