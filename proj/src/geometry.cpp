#include "chase/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace chase {

namespace {

constexpr double kParallelEps = 1e-12;

// Collects intersection parameters t along s (s.a + t*(s.b - s.a)) against
// another segment. Crossing contributes one t; collinear overlap contributes
// the two overlap endpoints.
void intersection_params(const Segment& s, const Segment& e,
                         std::vector<double>& out) {
  const Point2 r = s.b - s.a;
  const Point2 d = e.b - e.a;
  const double rxd = cross(r, d);
  const Point2 qp = e.a - s.a;
  if (std::abs(rxd) < kParallelEps) {
    if (std::abs(cross(qp, r)) >= kParallelEps) return;  // parallel disjoint
    const double rr = dot(r, r);
    if (rr < kParallelEps) return;  // degenerate s
    double t0 = dot(qp, r) / rr;
    double t1 = dot(e.b - s.a, r) / rr;
    if (t0 > t1) std::swap(t0, t1);
    t0 = std::max(t0, 0.0);
    t1 = std::min(t1, 1.0);
    if (t0 <= t1) {
      out.push_back(t0);
      out.push_back(t1);
    }
    return;
  }
  const double t = cross(qp, d) / rxd;
  const double u = cross(qp, r) / rxd;
  if (t >= -kParallelEps && t <= 1.0 + kParallelEps && u >= -kParallelEps &&
      u <= 1.0 + kParallelEps) {
    out.push_back(std::clamp(t, 0.0, 1.0));
  }
}

bool point_near_bbox(const Point2& p, const Polygon& poly, double eps) {
  return p.x >= poly.bbox_min().x - eps && p.x <= poly.bbox_max().x + eps &&
         p.y >= poly.bbox_min().y - eps && p.y <= poly.bbox_max().y + eps;
}

bool segment_meets_bbox(const Segment& s, const Polygon& poly) {
  const double lo_x = std::min(s.a.x, s.b.x), hi_x = std::max(s.a.x, s.b.x);
  const double lo_y = std::min(s.a.y, s.b.y), hi_y = std::max(s.a.y, s.b.y);
  return hi_x >= poly.bbox_min().x - kBoundaryEps &&
         lo_x <= poly.bbox_max().x + kBoundaryEps &&
         hi_y >= poly.bbox_min().y - kBoundaryEps &&
         lo_y <= poly.bbox_max().y + kBoundaryEps;
}

}  // namespace

double point_segment_distance(const Point2& p, const Segment& s) {
  const Point2 d = s.b - s.a;
  const double dd = dot(d, d);
  if (dd == 0.0) return distance(p, s.a);
  const double t = std::clamp(dot(p - s.a, d) / dd, 0.0, 1.0);
  return distance(p, s.a + d * t);
}

Polygon::Polygon(std::vector<Point2> vertices) : verts_(std::move(vertices)) {
  if (verts_.size() < 3)
    throw std::invalid_argument("polygon needs at least 3 vertices");
  for (const Point2& v : verts_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y))
      throw std::invalid_argument("polygon vertex is not finite");
  }
  // normalize to counter-clockwise
  if (signed_area() < 0.0) std::reverse(verts_.begin(), verts_.end());
  bbox_min_ = bbox_max_ = verts_[0];
  for (const Point2& v : verts_) {
    bbox_min_.x = std::min(bbox_min_.x, v.x);
    bbox_min_.y = std::min(bbox_min_.y, v.y);
    bbox_max_.x = std::max(bbox_max_.x, v.x);
    bbox_max_.y = std::max(bbox_max_.y, v.y);
  }
  // simplicity: no two non-adjacent edges intersect
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // adjacent
      if (segments_intersect(edge(i), edge(j)))
        throw std::invalid_argument("polygon is self-intersecting");
    }
  }
}

double Polygon::signed_area() const {
  double a = 0.0;
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i)
    a += cross(verts_[i], verts_[(i + 1) % n]);
  return 0.5 * a;
}

Point2 Polygon::centroid() const {
  Point2 c;
  for (const Point2& v : verts_) c = c + v;
  return c * (1.0 / static_cast<double>(verts_.size()));
}

std::optional<Point2> segments_intersect(const Segment& s1,
                                         const Segment& s2) {
  const Point2 r = s1.b - s1.a;
  const Point2 d = s2.b - s2.a;
  const double rxd = cross(r, d);
  const Point2 qp = s2.a - s1.a;
  if (std::abs(rxd) < kParallelEps) {
    if (std::abs(cross(qp, r)) >= kParallelEps) return std::nullopt;
    const double rr = dot(r, r);
    if (rr < kParallelEps) {
      // s1 degenerate: intersects iff s1.a lies on s2
      if (point_segment_distance(s1.a, s2) <= kBoundaryEps) return s1.a;
      return std::nullopt;
    }
    double t0 = dot(qp, r) / rr;
    double t1 = dot(s2.b - s1.a, r) / rr;
    if (t0 > t1) std::swap(t0, t1);
    t0 = std::max(t0, 0.0);
    t1 = std::min(t1, 1.0);
    if (t0 > t1) return std::nullopt;
    return s1.a + r * t0;  // overlap point nearest s1.a
  }
  const double t = cross(qp, d) / rxd;
  const double u = cross(qp, r) / rxd;
  if (t < -kParallelEps || t > 1.0 + kParallelEps || u < -kParallelEps ||
      u > 1.0 + kParallelEps)
    return std::nullopt;
  return s1.a + r * std::clamp(t, 0.0, 1.0);
}

bool point_in_polygon(const Point2& p, const Polygon& poly) {
  if (!point_near_bbox(p, poly, kBoundaryEps)) return false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (point_segment_distance(p, poly.edge(i)) <= kBoundaryEps) return true;
  }
  // even-odd crossing count with a +x ray
  bool inside = false;
  const auto& v = poly.vertices();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const bool cond = (v[i].y > p.y) != (v[j].y > p.y);
    if (cond) {
      const double xi =
          v[j].x + (v[i].x - v[j].x) * (p.y - v[j].y) / (v[i].y - v[j].y);
      if (p.x < xi) inside = !inside;
    }
  }
  return inside;
}

bool point_strictly_inside(const Point2& p, const Polygon& poly) {
  if (!point_near_bbox(p, poly, kBoundaryEps)) return false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (point_segment_distance(p, poly.edge(i)) <= kBoundaryEps) return false;
  }
  return point_in_polygon(p, poly);
}

bool segment_blocked(const Segment& s, const std::vector<Polygon>& obstacles) {
  if (obstacles.empty()) return false;
  for (const Polygon& poly : obstacles) {
    if (point_strictly_inside(s.a, poly) || point_strictly_inside(s.b, poly))
      return true;
  }
  // split s at all edge crossings and test the midpoint of each piece
  std::vector<double> ts{0.0, 1.0};
  for (const Polygon& poly : obstacles) {
    if (!segment_meets_bbox(s, poly)) continue;
    for (std::size_t i = 0; i < poly.size(); ++i)
      intersection_params(s, poly.edge(i), ts);
  }
  if (ts.size() == 2) return false;  // no crossings anywhere
  std::sort(ts.begin(), ts.end());
  const Point2 r = s.b - s.a;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (ts[i + 1] - ts[i] < 1e-12) continue;
    const Point2 mid = s.a + r * (0.5 * (ts[i] + ts[i + 1]));
    for (const Polygon& poly : obstacles) {
      if (point_strictly_inside(mid, poly)) return true;
    }
  }
  return false;
}

double ray_cast(const Point2& origin, double angle,
                const std::vector<Polygon>& obstacles, double max_range) {
  if (max_range <= 0.0) throw std::invalid_argument("max_range must be > 0");
  const Point2 tip{origin.x + max_range * std::cos(angle),
                   origin.y + max_range * std::sin(angle)};
  const Segment ray{origin, tip};
  double best = max_range;
  for (const Polygon& poly : obstacles) {
    if (!segment_meets_bbox(ray, poly)) continue;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      if (auto hit = segments_intersect(ray, poly.edge(i))) {
        best = std::min(best, distance(origin, *hit));
      }
    }
  }
  return best;
}

}  // namespace chase
