#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace chase {

// Tolerance for "on the boundary" decisions (closed-polygon convention).
constexpr double kBoundaryEps = 1e-9;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Point2& o) const { return x == o.x && y == o.y; }

  double norm() const { return std::hypot(x, y); }
};

inline double cross(const Point2& a, const Point2& b) {
  return a.x * b.y - a.y * b.x;
}
inline double dot(const Point2& a, const Point2& b) {
  return a.x * b.x + a.y * b.y;
}
inline double distance(const Point2& a, const Point2& b) {
  return (b - a).norm();
}

struct Segment {
  Point2 a;
  Point2 b;
  double length() const { return distance(a, b); }
};

double point_segment_distance(const Point2& p, const Segment& s);

// Simple polygon, normalized to counter-clockwise orientation on
// construction. Throws std::invalid_argument on <3 vertices or
// self-intersection.
class Polygon {
 public:
  explicit Polygon(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return verts_; }
  std::size_t size() const { return verts_.size(); }

  // Edge i connects vertex i to vertex (i+1) mod n.
  Segment edge(std::size_t i) const {
    return {verts_[i], verts_[(i + 1) % verts_.size()]};
  }

  double signed_area() const;
  Point2 centroid() const;

  const Point2& bbox_min() const { return bbox_min_; }
  const Point2& bbox_max() const { return bbox_max_; }

 private:
  std::vector<Point2> verts_;
  Point2 bbox_min_;
  Point2 bbox_max_;
};

// Intersection of closed segments. Collinear overlap returns the overlap
// point nearest s1.a. Parallel disjoint / non-intersecting -> nullopt.
std::optional<Point2> segments_intersect(const Segment& s1, const Segment& s2);

// Closed-polygon containment: boundary points (within kBoundaryEps) count
// as inside.
bool point_in_polygon(const Point2& p, const Polygon& poly);

// Strict interior: boundary points do not count.
bool point_strictly_inside(const Point2& p, const Polygon& poly);

// True iff the segment passes through the interior of any obstacle or an
// endpoint lies strictly inside one. Tangencies at vertices or sliding
// along an edge do not block.
bool segment_blocked(const Segment& s, const std::vector<Polygon>& obstacles);

// Distance to the nearest obstacle edge along the ray, clamped to max_range.
double ray_cast(const Point2& origin, double angle,
                const std::vector<Polygon>& obstacles, double max_range);

}  // namespace chase
