#pragma once

#include <map>
#include <vector>

#include "crplan/curvilinear.hpp"
#include "crplan/scenario.hpp"

namespace crplan {

/// Per-lanelet derived geometry (center frame, polygon, strip quads), built once per network.
class RoadIndex {
 public:
  explicit RoadIndex(const LaneletNetwork& net);

  const LaneletNetwork& network() const { return *net_; }
  const Lanelet& lanelet(LaneletId id) const { return net_->at(id); }
  const CurvilinearFrame& center_frame(LaneletId id) const { return entries_.at(id).frame; }
  const Polyline& polygon(LaneletId id) const { return entries_.at(id).polygon; }
  /// Convex quads between consecutive boundary vertex pairs.
  const std::vector<ConvexPolygon>& strips(LaneletId id) const { return entries_.at(id).strips; }
  double length(LaneletId id) const { return center_frame(id).length(); }
  /// Distance between the boundaries at the vertex nearest to arc length s.
  double width_at(LaneletId id, double s) const;

  std::vector<LaneletId> lanelets_containing(const Vec2& p) const;
  bool on_road(const Vec2& p) const;
  /// Lanelet containing p with the smallest |d| to its center; nullopt if off-road.
  std::optional<LaneletId> best_lanelet(const Vec2& p) const;

  /// True if the box overlaps the lanelet's area.
  bool occupies(LaneletId id, const ConvexPolygon& shape) const;

  std::vector<LaneletId> ids() const;

 private:
  struct Entry {
    CurvilinearFrame frame;
    Polyline polygon;
    std::vector<ConvexPolygon> strips;
    Vec2 bb_lo;
    Vec2 bb_hi;
  };
  const LaneletNetwork* net_;
  std::map<LaneletId, Entry> entries_;
};

}  // namespace crplan
