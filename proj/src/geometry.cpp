#include "crplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/LU>

namespace crplan {

double wrap_angle(double a) {
  a = std::fmod(a + std::numbers::pi, 2.0 * std::numbers::pi);
  if (a <= 0.0) a += 2.0 * std::numbers::pi;
  return a - std::numbers::pi;
}

namespace {

// Collinearity threshold relative to the magnitude of the involved edges.
bool turns_left(const Vec2& o, const Vec2& a, const Vec2& b) {
  const Vec2 u = a - o;
  const Vec2 v = b - o;
  const double c = cross(u, v);
  return c > 1e-12 * u.norm() * v.norm();
}

}  // namespace

ConvexPolygon ConvexPolygon::hull(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  std::vector<Vec2> unique;
  unique.reserve(pts.size());
  for (const auto& p : pts) {
    bool dup = false;
    // Sorted by x, so near-duplicates sit close together; scan back while x is close.
    for (auto it = unique.rbegin(); it != unique.rend() && p.x() - it->x() <= kVertexMergeTol; ++it) {
      if ((p - *it).norm() <= kVertexMergeTol) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(p);
  }

  ConvexPolygon out;
  if (unique.size() <= 2) {
    out.vertices_ = unique;
    return out;
  }

  std::vector<Vec2> h(2 * unique.size());
  std::size_t k = 0;
  for (const auto& p : unique) {
    while (k >= 2 && !turns_left(h[k - 2], h[k - 1], p)) --k;
    h[k++] = p;
  }
  for (std::size_t i = unique.size() - 1, t = k + 1; i-- > 0;) {
    const Vec2& p = unique[i];
    while (k >= t && !turns_left(h[k - 2], h[k - 1], p)) --k;
    h[k++] = p;
  }
  h.resize(k - 1);
  if (h.size() == 2 && (h[0] - h[1]).norm() <= kVertexMergeTol) h.resize(1);
  out.vertices_ = std::move(h);
  return out;
}

ConvexPolygon ConvexPolygon::box(double x_lo, double x_hi, double y_lo, double y_hi) {
  const std::array<Vec2, 4> pts{Vec2{x_lo, y_lo}, Vec2{x_hi, y_lo}, Vec2{x_hi, y_hi},
                                Vec2{x_lo, y_hi}};
  return hull(pts);
}

double ConvexPolygon::area() const {
  if (vertices_.size() < 3) return 0.0;
  double a = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    a += cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
  }
  return 0.5 * a;
}

bool ConvexPolygon::contains(const Vec2& p, double tol) const {
  const std::size_t n = vertices_.size();
  if (n == 0) return false;
  if (n == 1) return (p - vertices_[0]).norm() <= tol;
  if (n == 2) return point_segment_distance(p, vertices_[0], vertices_[1]) <= tol;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[(i + 1) % n];
    const Vec2 e = b - a;
    if (cross(e, p - a) < -tol * e.norm()) return false;
  }
  return true;
}

std::vector<Halfplane> ConvexPolygon::halfplanes(double tol) const {
  std::vector<Halfplane> hs;
  const std::size_t n = vertices_.size();
  if (n == 0) {
    // Infeasible pair describes the empty set.
    hs.push_back({Vec2{1.0, 0.0}, -1.0});
    hs.push_back({Vec2{-1.0, 0.0}, -1.0});
    return hs;
  }
  if (n == 1) {
    const Vec2& p = vertices_[0];
    hs.push_back({Vec2{1.0, 0.0}, p.x() + tol});
    hs.push_back({Vec2{-1.0, 0.0}, -p.x() + tol});
    hs.push_back({Vec2{0.0, 1.0}, p.y() + tol});
    hs.push_back({Vec2{0.0, -1.0}, -p.y() + tol});
    return hs;
  }
  if (n == 2) {
    const Vec2& a = vertices_[0];
    const Vec2& b = vertices_[1];
    const Vec2 t = (b - a).normalized();
    const Vec2 nrm = left_normal(t);
    hs.push_back({nrm, nrm.dot(a) + tol});
    hs.push_back({-nrm, -nrm.dot(a) + tol});
    hs.push_back({t, t.dot(b) + tol});
    hs.push_back({-t, -t.dot(a) + tol});
    return hs;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[(i + 1) % n];
    const Vec2 e = (b - a).normalized();
    const Vec2 outward{e.y(), -e.x()};
    hs.push_back({outward, outward.dot(a) + tol});
  }
  return hs;
}

double ConvexPolygon::min_coord(int axis) const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : vertices_) m = std::min(m, v[axis]);
  return m;
}

double ConvexPolygon::max_coord(int axis) const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices_) m = std::max(m, v[axis]);
  return m;
}

ConvexPolygon ConvexPolygon::translated(const Vec2& t) const {
  ConvexPolygon out = *this;
  for (auto& v : out.vertices_) v += t;
  return out;
}

namespace {

void collect_axes(const ConvexPolygon& p, std::vector<Vec2>& axes) {
  const auto& v = p.vertices();
  const std::size_t n = v.size();
  if (n < 2) return;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = v[(i + 1) % n] - v[i];
    axes.push_back(left_normal(e));
    if (n == 2) {
      axes.push_back(e);
      break;
    }
  }
}

std::pair<double, double> project(const ConvexPolygon& p, const Vec2& axis) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& v : p.vertices()) {
    const double x = axis.dot(v);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {lo, hi};
}

}  // namespace

bool polygons_intersect(const ConvexPolygon& a, const ConvexPolygon& b) {
  if (a.empty() || b.empty()) return false;
  if (a.size() == 1 && b.size() == 1) return (a.vertices()[0] - b.vertices()[0]).norm() <= kVertexMergeTol;
  std::vector<Vec2> axes;
  collect_axes(a, axes);
  collect_axes(b, axes);
  for (const auto& axis : axes) {
    const auto [alo, ahi] = project(a, axis);
    const auto [blo, bhi] = project(b, axis);
    if (ahi < blo || bhi < alo) return false;
  }
  return true;
}

ConvexPolygon affine_transform(const ConvexPolygon& a, const Mat2& m) {
  if (std::abs(m.determinant()) < 1e-14) throw GeometryError("affine_transform: singular matrix");
  std::vector<Vec2> pts;
  pts.reserve(a.size());
  for (const auto& v : a.vertices()) pts.push_back(m * v);
  return ConvexPolygon::hull(pts);
}

ConvexPolygon minkowski_segment(const ConvexPolygon& a, const Vec2& dir, double r) {
  if (r <= 0.0 || dir.norm() == 0.0) return a;
  std::vector<Vec2> pts;
  pts.reserve(2 * a.size());
  const Vec2 offset = r * dir;
  for (const auto& v : a.vertices()) {
    pts.push_back(v - offset);
    pts.push_back(v + offset);
  }
  return ConvexPolygon::hull(pts);
}

ConvexPolygon clip(const ConvexPolygon& a, const Halfplane& h) {
  const auto& v = a.vertices();
  const std::size_t n = v.size();
  if (n == 0) return a;
  auto inside = [&](const Vec2& p) { return h.normal.dot(p) <= h.offset; };
  if (n == 1) return inside(v[0]) ? a : ConvexPolygon{};

  std::vector<Vec2> out;
  out.reserve(n + 2);
  const std::size_t edges = (n == 2) ? 1 : n;
  for (std::size_t i = 0; i < edges; ++i) {
    const Vec2& cur = v[i];
    const Vec2& nxt = v[(i + 1) % n];
    const bool ci = inside(cur);
    const bool ni = inside(nxt);
    if (ci) out.push_back(cur);
    if (ci != ni) {
      const double denom = h.normal.dot(nxt - cur);
      const double t = (h.offset - h.normal.dot(cur)) / denom;
      out.push_back(cur + std::clamp(t, 0.0, 1.0) * (nxt - cur));
    }
    if (n == 2 && ni) out.push_back(nxt);
  }
  return ConvexPolygon::hull(out);
}

ConvexPolygon intersect(const ConvexPolygon& a, const ConvexPolygon& b) {
  ConvexPolygon out = a;
  for (const auto& h : b.halfplanes(1e-12)) {
    out = clip(out, h);
    if (out.empty()) break;
  }
  return out;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 e = b - a;
  const double len2 = e.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(e) / len2, 0.0, 1.0);
  return (p - (a + t * e)).norm();
}

bool point_in_polygon(std::span<const Vec2> polygon, const Vec2& p, double tol) {
  const std::size_t n = polygon.size();
  if (n == 0) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (point_segment_distance(p, polygon[i], polygon[(i + 1) % n]) <= tol) return true;
  }
  bool in = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) in = !in;
    }
  }
  return in;
}

namespace {

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = cross(b - a, c - a);
  const double scale = (b - a).norm() * (c - a).norm();
  if (std::abs(v) <= 1e-12 * scale) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return p.x() <= std::max(a.x(), b.x()) + 1e-12 && p.x() >= std::min(a.x(), b.x()) - 1e-12 &&
         p.y() <= std::max(a.y(), b.y()) + 1e-12 && p.y() >= std::min(a.y(), b.y()) - 1e-12;
}

}  // namespace

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool is_simple_polyline(std::span<const Vec2> line) {
  const std::size_t n = line.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 2; j + 1 < n; ++j) {
      if (segments_intersect(line[i], line[i + 1], line[j], line[j + 1])) return false;
    }
  }
  return true;
}

std::array<Vec2, 4> OrientedBox::corners() const {
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const Vec2 f{c * 0.5 * length, s * 0.5 * length};
  const Vec2 l{-s * 0.5 * width, c * 0.5 * width};
  return {center - f - l, center + f - l, center + f + l, center - f + l};
}

ConvexPolygon OrientedBox::polygon() const {
  const auto c = corners();
  return ConvexPolygon::hull(c);
}

}  // namespace crplan
