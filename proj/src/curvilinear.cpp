#include "crplan/curvilinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace crplan {

CurvilinearFrame::CurvilinearFrame(Polyline path) : path_(std::move(path)) {
  if (path_.size() < 2) throw GeometryError("curvilinear frame needs at least 2 vertices");
  for (std::size_t i = 0; i + 1 < path_.size(); ++i) {
    const Vec2 e = path_[i + 1] - path_[i];
    const double len = e.norm();
    if (len <= kVertexMergeTol) {
      std::ostringstream msg;
      msg << "curvilinear frame: duplicate consecutive vertices at index " << i;
      throw GeometryError(msg.str());
    }
    tangent_.push_back(e / len);
    seg_len_.push_back(len);
  }
  arc_.assign(path_.size(), 0.0);
  for (std::size_t i = 0; i < seg_len_.size(); ++i) arc_[i + 1] = arc_[i] + seg_len_[i];

  const std::size_t n = path_.size();
  miter_.resize(n);
  vertex_heading_.resize(n);
  miter_[0] = left_normal(tangent_.front());
  miter_[n - 1] = left_normal(tangent_.back());
  vertex_heading_[0] = std::atan2(tangent_.front().y(), tangent_.front().x());
  vertex_heading_[n - 1] = std::atan2(tangent_.back().y(), tangent_.back().x());
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2 sum = tangent_[i - 1] + tangent_[i];
    if (sum.norm() < 0.1) {
      std::ostringstream msg;
      msg << "curvilinear frame: reference path folds back at vertex " << i;
      throw GeometryError(msg.str());
    }
    const Vec2 bis = sum.normalized();
    const Vec2 nb = left_normal(bis);
    miter_[i] = nb / nb.dot(left_normal(tangent_[i]));
    vertex_heading_[i] = std::atan2(bis.y(), bis.x());
  }

  curvature_.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2& a = path_[i - 1];
    const Vec2& b = path_[i];
    const Vec2& c = path_[i + 1];
    curvature_[i] = 2.0 * cross(b - a, c - b) / ((b - a).norm() * (c - b).norm() * (c - a).norm());
  }
  if (n > 2) {
    curvature_[0] = curvature_[1];
    curvature_[n - 1] = curvature_[n - 2];
  }
}

std::size_t CurvilinearFrame::segment_at(double s) const {
  const auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
  const auto idx = static_cast<std::ptrdiff_t>(it - arc_.begin()) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(num_segments()) - 1));
}

std::optional<CurvilinearFrame::Candidate> CurvilinearFrame::solve_in_segment(std::size_t i,
                                                                             const Vec2& p) const {
  const Vec2 r = p - path_[i];
  const Vec2& t = tangent_[i];
  const double d = r.dot(left_normal(t));
  const double tp = r.dot(t);
  const double a = miter_[i].dot(t);
  const double b = miter_[i + 1].dot(t);
  const double len = seg_len_[i];
  const double denom = len + d * (b - a);
  if (denom <= 1e-9 * len) return std::nullopt;
  // Along-segment distance; written so that straight segments reproduce tp exactly.
  const double along = (tp - d * a) * (len / denom);
  constexpr double eps = 1e-12;
  if (along < -eps * len || along > (1.0 + eps) * len) return std::nullopt;
  return Candidate{i, std::clamp(along, 0.0, len), d};
}

std::optional<FrenetPoint> CurvilinearFrame::locate(const Vec2& p, Failure& why) const {
  std::optional<Candidate> best;
  std::vector<Candidate> all;
  for (std::size_t i = 0; i < num_segments(); ++i) {
    if (auto c = solve_in_segment(i, p)) {
      all.push_back(*c);
      if (!best || std::abs(c->d) < std::abs(best->d)) best = c;
    }
  }
  if (!best) {
    why = Failure::kOutOfDomain;
    return std::nullopt;
  }
  const double s_best = arc_[best->segment] + best->along;
  for (const auto& c : all) {
    const std::size_t gap = c.segment > best->segment ? c.segment - best->segment : best->segment - c.segment;
    if (gap <= 1) continue;
    const double s = arc_[c.segment] + c.along;
    if (std::abs(std::abs(c.d) - std::abs(best->d)) <= 1e-9 && std::abs(s - s_best) > 1e-9) {
      why = Failure::kAmbiguous;
      return std::nullopt;
    }
  }
  why = Failure::kNone;
  return FrenetPoint{s_best, best->d};
}

std::optional<FrenetPoint> CurvilinearFrame::try_to_curvilinear(const Vec2& p) const {
  Failure why = Failure::kNone;
  return locate(p, why);
}

FrenetPoint CurvilinearFrame::to_curvilinear(const Vec2& p) const {
  Failure why = Failure::kNone;
  if (auto fp = locate(p, why)) return *fp;
  std::ostringstream msg;
  msg << "to_curvilinear: point (" << p.x() << ", " << p.y() << ") "
      << (why == Failure::kAmbiguous ? "has an ambiguous projection" : "is outside the projection domain");
  throw GeometryError(msg.str());
}

FrenetPoint CurvilinearFrame::project_clamped(const Vec2& p) const {
  if (auto fp = try_to_curvilinear(p)) return *fp;
  double best = std::numeric_limits<double>::infinity();
  FrenetPoint out;
  for (std::size_t i = 0; i < num_segments(); ++i) {
    const double dist = point_segment_distance(p, path_[i], path_[i + 1]);
    if (dist < best) {
      best = dist;
      const Vec2 r = p - path_[i];
      const double t = std::clamp(r.dot(tangent_[i]) / seg_len_[i], 0.0, 1.0);
      out.s = arc_[i] + t * seg_len_[i];
      out.d = r.dot(left_normal(tangent_[i]));
    }
  }
  return out;
}

Vec2 CurvilinearFrame::to_cartesian(double s, double d) const {
  constexpr double tol = 1e-9;
  if (s < -tol || s > length() + tol) {
    std::ostringstream msg;
    msg << "to_cartesian: s = " << s << " outside [0, " << length() << "]";
    throw GeometryError(msg.str());
  }
  s = std::clamp(s, 0.0, length());
  const std::size_t i = segment_at(s);
  const Vec2& t = tangent_[i];
  const double len = seg_len_[i];
  const double a = miter_[i].dot(t);
  const double b = miter_[i + 1].dot(t);
  if (len + d * (b - a) <= 1e-9 * len) {
    std::ostringstream msg;
    msg << "to_cartesian: offset d = " << d << " outside the injective band at s = " << s;
    throw GeometryError(msg.str());
  }
  const double along = s - arc_[i];
  const double lambda = along / len;
  return path_[i] + along * t + d * (miter_[i] + lambda * (miter_[i + 1] - miter_[i]));
}

double CurvilinearFrame::heading_at(double s) const {
  s = std::clamp(s, 0.0, length());
  const std::size_t i = segment_at(s);
  const double lambda = (s - arc_[i]) / seg_len_[i];
  const double h0 = vertex_heading_[i];
  return wrap_angle(h0 + lambda * wrap_angle(vertex_heading_[i + 1] - h0));
}

double CurvilinearFrame::curvature_at(double s) const {
  s = std::clamp(s, 0.0, length());
  const std::size_t i = segment_at(s);
  const double lambda = (s - arc_[i]) / seg_len_[i];
  return (1.0 - lambda) * curvature_[i] + lambda * curvature_[i + 1];
}

double CurvilinearFrame::curvature_rate_at(double s) const {
  const std::size_t i = segment_at(std::clamp(s, 0.0, length()));
  return (curvature_[i + 1] - curvature_[i]) / seg_len_[i];
}

double CurvilinearFrame::max_abs_curvature() const {
  double m = 0.0;
  for (double k : curvature_) m = std::max(m, std::abs(k));
  return m;
}

}  // namespace crplan
