#include "chase/isovist.hpp"

#include <cmath>

namespace chase {

double angle_diff(double a, double b) {
  double d = std::fmod(a - b, 2.0 * kPi);
  if (d > kPi) d -= 2.0 * kPi;
  if (d < -kPi) d += 2.0 * kPi;
  return d;
}

IsovistPolygon isovist(const WorldMap& map, const Point2& apex,
                       const Point2& aim, const IsovistConfig& cfg) {
  const double dir =
      (distance(apex, aim) < 1e-12) ? 0.0 : bearing(apex, aim);
  const int n = std::max(8, cfg.ray_count);
  std::vector<Point2> verts;
  const bool full_circle = cfg.fov_half_angle >= kPi - 1e-9;
  if (!full_circle) verts.push_back(apex);
  for (int i = 0; i < n; ++i) {
    const double a = dir - cfg.fov_half_angle +
                     2.0 * cfg.fov_half_angle * static_cast<double>(i) /
                         static_cast<double>(n - 1);
    const double d = ray_cast(apex, a, map.obstacles(), cfg.sight_range);
    verts.push_back({apex.x + d * std::cos(a), apex.y + d * std::sin(a)});
  }
  return {apex, Polygon(std::move(verts))};
}

bool is_visible(const WorldMap& map, const Point2& observer,
                const Point2& target, const Point2& aim,
                const IsovistConfig& cfg) {
  const double d = distance(observer, target);
  if (d < 1e-12) return true;  // co-located
  if (d > cfg.sight_range + kBoundaryEps) return false;
  const double aim_dir =
      (distance(observer, aim) < 1e-12) ? 0.0 : bearing(observer, aim);
  if (std::abs(angle_diff(bearing(observer, target), aim_dir)) >
      cfg.fov_half_angle + 1e-12)
    return false;
  return !segment_blocked({observer, target}, map.obstacles());
}

VisibilityCount time_visible(const Trajectory& observer_traj,
                             const Trajectory& target_traj,
                             const WorldMap& map, const IsovistConfig& cfg,
                             int t_begin, int t_end) {
  if (t_begin > t_end)
    throw std::invalid_argument("time_visible: empty time range");
  if (!observer_traj.covers(t_begin, t_end) ||
      !target_traj.covers(t_begin, t_end))
    throw std::invalid_argument(
        "time_visible: trajectories do not cover the requested range");
  VisibilityCount out;
  for (int t = t_begin; t <= t_end; ++t) {
    const Point2& tgt = target_traj.at(t);
    if (is_visible(map, observer_traj.at(t), tgt, tgt, cfg)) {
      ++out.steps_visible;
      if (!out.detected_at) out.detected_at = t;
    }
  }
  return out;
}

}  // namespace chase
