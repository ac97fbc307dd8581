#include "crplan/road_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crplan {

RoadIndex::RoadIndex(const LaneletNetwork& net) : net_(&net) {
  for (const auto& [id, l] : net.lanelets) {
    std::vector<ConvexPolygon> strips;
    for (std::size_t i = 0; i + 1 < l.left_boundary.size(); ++i) {
      const std::array<Vec2, 4> quad{l.left_boundary[i], l.left_boundary[i + 1], l.right_boundary[i + 1],
                                     l.right_boundary[i]};
      strips.push_back(ConvexPolygon::hull(quad));
    }
    Polyline poly = lanelet_polygon(l);
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi = -lo;
    for (const auto& p : poly) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    entries_.emplace(id, Entry{CurvilinearFrame(lane_center(l)), std::move(poly), std::move(strips), lo, hi});
  }
}

double RoadIndex::width_at(LaneletId id, double s) const {
  const auto& l = lanelet(id);
  const auto arcs = center_frame(id).arc_lengths();
  const auto it = std::lower_bound(arcs.begin(), arcs.end(), s);
  std::size_t i = static_cast<std::size_t>(it - arcs.begin());
  if (i >= arcs.size()) i = arcs.size() - 1;
  if (i > 0 && std::abs(arcs[i - 1] - s) < std::abs(arcs[i] - s)) --i;
  return (l.left_boundary[i] - l.right_boundary[i]).norm();
}

std::vector<LaneletId> RoadIndex::lanelets_containing(const Vec2& p) const {
  std::vector<LaneletId> out;
  for (const auto& [id, e] : entries_) {
    if (p.x() < e.bb_lo.x() - 1e-9 || p.y() < e.bb_lo.y() - 1e-9 || p.x() > e.bb_hi.x() + 1e-9 ||
        p.y() > e.bb_hi.y() + 1e-9) {
      continue;
    }
    if (point_in_polygon(e.polygon, p)) out.push_back(id);
  }
  return out;
}

bool RoadIndex::on_road(const Vec2& p) const {
  for (const auto& [id, e] : entries_) {
    if (p.x() < e.bb_lo.x() - 1e-9 || p.y() < e.bb_lo.y() - 1e-9 || p.x() > e.bb_hi.x() + 1e-9 ||
        p.y() > e.bb_hi.y() + 1e-9) {
      continue;
    }
    if (point_in_polygon(e.polygon, p)) return true;
  }
  return false;
}

std::optional<LaneletId> RoadIndex::best_lanelet(const Vec2& p) const {
  std::optional<LaneletId> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (LaneletId id : lanelets_containing(p)) {
    const double d = std::abs(center_frame(id).project_clamped(p).d);
    if (d < best_d) {
      best_d = d;
      best = id;
    }
  }
  return best;
}

bool RoadIndex::occupies(LaneletId id, const ConvexPolygon& shape) const {
  const auto& e = entries_.at(id);
  if (shape.max_coord(0) < e.bb_lo.x() || shape.min_coord(0) > e.bb_hi.x() || shape.max_coord(1) < e.bb_lo.y() ||
      shape.min_coord(1) > e.bb_hi.y()) {
    return false;
  }
  for (const auto& strip : e.strips) {
    if (polygons_intersect(strip, shape)) return true;
  }
  return false;
}

std::vector<LaneletId> RoadIndex::ids() const {
  std::vector<LaneletId> out;
  for (const auto& [id, e] : entries_) out.push_back(id);
  return out;
}

}  // namespace crplan
