#include "crplan/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crplan {

Mat2 transition_matrix(double dt) {
  Mat2 a;
  a << 1.0, dt, 0.0, 1.0;
  return a;
}

Vec2 input_direction(double dt) { return {0.5 * dt * dt, dt}; }

PVSet propagate(const PVSet& set, double a_max, double dt) {
  if (set.empty()) return set;
  ConvexPolygon p = affine_transform(set.polygon, transition_matrix(dt));
  p = minkowski_segment(p, input_direction(dt), a_max);
  return {clip(p, Halfplane{{0.0, -1.0}, 0.0})};
}

PVSet clip_xi(const PVSet& set, double lo, double hi) {
  ConvexPolygon p = clip(set.polygon, Halfplane{{-1.0, 0.0}, -lo});
  return {clip(p, Halfplane{{1.0, 0.0}, hi})};
}

PVSet prune_speed_limit(const PVSet& set, double limit) {
  if (limit <= 0.0) return {};
  return {clip(set.polygon, Halfplane{{0.0, 1.0}, limit})};
}

PVSet prune_friction(const PVSet& set, double kappa_max, double a_max) {
  if (kappa_max <= 0.0) return set;
  return prune_speed_limit(set, std::sqrt(a_max / kappa_max));
}

std::vector<Interval> merge_intervals(std::vector<Interval> in) {
  std::sort(in.begin(), in.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const auto& iv : in) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

std::vector<PVSet> split_free(const PVSet& set, const std::vector<Interval>& blocked, double lo, double hi) {
  std::vector<PVSet> out;
  if (set.empty() || hi < lo) return out;
  double cursor = lo;
  auto emit = [&](double a, double b) {
    if (b < a) return;
    PVSet piece = clip_xi(set, a, b);
    if (!piece.empty()) out.push_back(std::move(piece));
  };
  for (const auto& iv : merge_intervals(blocked)) {
    if (iv.hi < cursor) continue;
    if (iv.lo > hi) break;
    emit(cursor, std::min(iv.lo, hi));
    cursor = iv.hi;
    if (cursor > hi) break;
  }
  if (cursor <= hi) emit(cursor, hi);
  return out;
}

std::vector<Interval> blocked_intervals(const RoadIndex& road, LaneletId id, const std::vector<Obstacle>& obstacles,
                                        int k, double inflation) {
  std::vector<Interval> out;
  const CurvilinearFrame& frame = road.center_frame(id);
  for (const auto& o : obstacles) {
    const OrientedBox box = obstacle_occupancy(o, k);
    const ConvexPolygon shape = box.polygon();
    if (!road.occupies(id, shape)) continue;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : box.corners()) {
      const double s = frame.project_clamped(c).s;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    out.push_back({lo - inflation, hi + inflation});
  }
  return out;
}

std::vector<PVSet> constrain_free_space(const PVSet& set, const RoadIndex& road, LaneletId id,
                                        const std::vector<Obstacle>& obstacles, int k, double ego_length,
                                        double safety_margin) {
  const auto blocked = blocked_intervals(road, id, obstacles, k, 0.5 * ego_length + safety_margin);
  return split_free(set, blocked, 0.0, road.length(id));
}

}  // namespace crplan
