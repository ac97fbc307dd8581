#pragma once

// Reference computations used as test oracles. Everything here is written
// from first principles on plain arrays and does not call into the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using P2 = std::array<double, 2>;

inline double cross(const P2& o, const P2& a, const P2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/// Point inside a CCW convex polygon; tol > 0 grows it, tol < 0 shrinks it.
inline bool inside_convex(const std::vector<P2>& poly, const P2& p, double tol) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const P2& a = poly[i];
    const P2& b = poly[(i + 1) % n];
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    if (cross(a, b, p) < -tol * len) return false;
  }
  return true;
}

inline std::optional<P2> segment_crossing(const P2& a, const P2& b, const P2& c, const P2& d) {
  const double r0 = b[0] - a[0], r1 = b[1] - a[1];
  const double s0 = d[0] - c[0], s1 = d[1] - c[1];
  const double den = r0 * s1 - r1 * s0;
  if (std::abs(den) < 1e-300) return std::nullopt;
  const double t = ((c[0] - a[0]) * s1 - (c[1] - a[1]) * s0) / den;
  const double u = ((c[0] - a[0]) * r1 - (c[1] - a[1]) * r0) / den;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return P2{a[0] + t * r0, a[1] + t * r1};
}

/// Candidate points that contain every vertex of the intersection of two convex polygons.
inline std::vector<P2> overlap_candidates(const std::vector<P2>& a, const std::vector<P2>& b) {
  std::vector<P2> pts(a.begin(), a.end());
  pts.insert(pts.end(), b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (auto x = segment_crossing(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) pts.push_back(*x);
    }
  }
  return pts;
}

enum class Overlap { kDisjoint, kIntersecting, kBand };

/**
 * Sampling decision for two convex polygons. Disjoint when no candidate lies
 * in both grown by margin; intersecting when the centroid of the common
 * candidates lies in both shrunk by margin; otherwise inside the margin band.
 */
inline Overlap classify_overlap(const std::vector<P2>& a, const std::vector<P2>& b, double margin) {
  const auto pts = overlap_candidates(a, b);
  std::vector<P2> common;
  bool loose = false;
  for (const auto& p : pts) {
    if (inside_convex(a, p, margin) && inside_convex(b, p, margin)) loose = true;
    if (inside_convex(a, p, 1e-12) && inside_convex(b, p, 1e-12)) common.push_back(p);
  }
  if (!loose) return Overlap::kDisjoint;
  if (common.empty()) return Overlap::kBand;
  P2 c{0.0, 0.0};
  for (const auto& p : common) {
    c[0] += p[0] / common.size();
    c[1] += p[1] / common.size();
  }
  if (inside_convex(a, c, -margin) && inside_convex(b, c, -margin)) return Overlap::kIntersecting;
  return Overlap::kBand;
}

/// Gaussian elimination with partial pivoting on a dense system.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> m, std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    }
    std::swap(m[c], m[piv]);
    std::swap(rhs[c], rhs[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = rhs[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= m[i][k] * x[k];
    x[i] = acc / m[i][i];
  }
  return x;
}

/// Quintic through (x, v, a) at 0 and T, via the full 6x6 boundary system.
inline std::vector<double> quintic_coefficients(double x0, double v0, double a0, double x1, double v1, double a1,
                                                double T) {
  std::vector<std::vector<double>> m(6, std::vector<double>(6, 0.0));
  std::vector<double> rhs{x0, v0, a0, x1, v1, a1};
  for (int j = 0; j < 6; ++j) {
    m[0][j] = j == 0 ? 1.0 : 0.0;
    m[1][j] = j == 1 ? 1.0 : 0.0;
    m[2][j] = j == 2 ? 2.0 : 0.0;
    m[3][j] = std::pow(T, j);
    m[4][j] = j >= 1 ? j * std::pow(T, j - 1) : 0.0;
    m[5][j] = j >= 2 ? j * (j - 1) * std::pow(T, j - 2) : 0.0;
  }
  return solve_dense(m, rhs);
}

/// Kinematic single-track state (x, y, delta, v, psi) and input (v_delta, a).
using KsState = std::array<double, 5>;
using KsInput = std::array<double, 2>;

struct KsLimits {
  double wheelbase = 2.578;
  double delta_max = 0.91;
  double v_delta_max = 0.4;
  double a_max = 11.5;
};

inline KsState ks_rate(const KsState& s, const KsInput& u, const KsLimits& lim) {
  const double vd = std::clamp(u[0], -lim.v_delta_max, lim.v_delta_max);
  const double a = std::clamp(u[1], -lim.a_max, lim.a_max);
  return {s[3] * std::cos(s[4]), s[3] * std::sin(s[4]), vd, a, s[3] * std::tan(s[2]) / lim.wheelbase};
}

inline KsState ks_rk4(const KsState& s, const KsInput& u, double dt, const KsLimits& lim) {
  auto add = [](const KsState& a, const KsState& b, double h) {
    KsState r;
    for (int i = 0; i < 5; ++i) r[i] = a[i] + h * b[i];
    return r;
  };
  const KsState k1 = ks_rate(s, u, lim);
  const KsState k2 = ks_rate(add(s, k1, 0.5 * dt), u, lim);
  const KsState k3 = ks_rate(add(s, k2, 0.5 * dt), u, lim);
  const KsState k4 = ks_rate(add(s, k3, dt), u, lim);
  KsState r;
  for (int i = 0; i < 5; ++i) r[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return r;
}

/// Tracking objective over an input sequence with diagonal weights q (position) and r (input).
inline double tracking_cost(const KsState& x0, const std::vector<KsInput>& u, const std::vector<P2>& ref,
                            double dt, const KsLimits& lim, const P2& q, const P2& r) {
  KsState x = x0;
  double j = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    x = ks_rk4(x, u[i], dt, lim);
    const double ex = x[0] - ref[i + 1][0];
    const double ey = x[1] - ref[i + 1][1];
    j += q[0] * ex * ex + q[1] * ey * ey + r[0] * u[i][0] * u[i][0] + r[1] * u[i][1] * u[i][1];
  }
  return j;
}

/// Exhaustive search over `levels` evenly spaced values per input channel and step.
inline double grid_search_tracking(const KsState& x0, const std::vector<P2>& ref, double dt, const KsLimits& lim,
                                   const P2& q, const P2& r, int levels) {
  const std::size_t n = ref.size() - 1;
  std::vector<double> vd_levels, a_levels;
  for (int i = 0; i < levels; ++i) {
    const double f = -1.0 + 2.0 * i / (levels - 1);
    vd_levels.push_back(f * lim.v_delta_max);
    a_levels.push_back(f * lim.a_max);
  }
  std::vector<KsInput> u(n);
  double best = std::numeric_limits<double>::infinity();
  const std::size_t per_step = static_cast<std::size_t>(levels) * levels;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= per_step;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t pick = c % per_step;
      c /= per_step;
      u[i] = {vd_levels[pick % levels], a_levels[pick / levels]};
    }
    best = std::min(best, tracking_cost(x0, u, ref, dt, lim, q, r));
  }
  return best;
}

/// Every simple path from start over the given directed graph, as strings "a-b-c".
inline std::set<std::string> simple_path_strings(const std::map<int, std::vector<int>>& graph, int start) {
  std::set<std::string> out;
  std::vector<int> path{start};
  std::function<void()> dfs = [&] {
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) s += (i ? "-" : "") + std::to_string(path[i]);
    out.insert(s);
    const auto it = graph.find(path.back());
    if (it == graph.end()) return;
    for (int next : it->second) {
      if (std::find(path.begin(), path.end(), next) != path.end()) continue;
      path.push_back(next);
      dfs();
      path.pop_back();
    }
  };
  dfs();
  return out;
}

/// Complement of closed intervals inside [lo, hi].
inline std::vector<std::pair<double, double>> interval_complement(std::vector<std::pair<double, double>> blocked,
                                                                  double lo, double hi) {
  std::sort(blocked.begin(), blocked.end());
  std::vector<std::pair<double, double>> out;
  double cur = lo;
  for (const auto& [a, b] : blocked) {
    if (b < cur) continue;
    if (a > cur) out.push_back({cur, std::min(a, hi)});
    cur = std::max(cur, b);
    if (cur >= hi) break;
  }
  if (cur < hi) out.push_back({cur, hi});
  return out;
}

/// Winding-number point-in-polygon, boundary counted as inside.
inline bool inside_simple_polygon(const std::vector<P2>& poly, const P2& p) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const P2& a = poly[i];
    const P2& b = poly[(i + 1) % n];
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    const double t = ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / (len * len);
    if (t >= 0.0 && t <= 1.0 && std::abs(cross(a, b, p)) / len <= 1e-9) return true;
  }
  int wn = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const P2& a = poly[i];
    const P2& b = poly[(i + 1) % n];
    if (a[1] <= p[1]) {
      if (b[1] > p[1] && cross(a, b, p) > 0.0) ++wn;
    } else if (b[1] <= p[1] && cross(a, b, p) < 0.0) {
      --wn;
    }
  }
  return wn != 0;
}

}  // namespace oracle
