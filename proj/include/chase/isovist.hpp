#pragma once

#include <optional>

#include "chase/rrt.hpp"
#include "chase/world_map.hpp"

namespace chase {

constexpr double kPi = 3.14159265358979323846;

struct IsovistConfig {
  double fov_half_angle = 22.5 * kPi / 180.0;  // 45-degree cone total
  double sight_range = 25.0;
  int ray_count = 64;  // angular resolution for polygon construction
};

struct IsovistPolygon {
  Point2 apex;
  Polygon boundary;
};

struct VisibilityCount {
  int steps_visible = 0;
  std::optional<int> detected_at;
};

inline double bearing(const Point2& from, const Point2& to) {
  return std::atan2(to.y - from.y, to.x - from.x);
}

// Smallest signed angular difference, in [-pi, pi].
double angle_diff(double a, double b);

// View cone polygon: apex plus ray-cast hits at ray_count evenly spaced
// angles across [bearing - fov_half, bearing + fov_half]. When apex == aim
// the aim direction defaults to +x.
IsovistPolygon isovist(const WorldMap& map, const Point2& apex,
                       const Point2& aim, const IsovistConfig& cfg);

// Analytic visibility test: within sight_range, within the cone aimed at
// `aim`, and the sight segment unblocked. Co-located observer/target is
// always visible.
bool is_visible(const WorldMap& map, const Point2& observer,
                const Point2& target, const Point2& aim,
                const IsovistConfig& cfg);

// Per-step visibility over [t_begin, t_end]; the cone is aimed at the
// target's current position at each step. Both trajectories must cover the
// interval.
VisibilityCount time_visible(const Trajectory& observer_traj,
                             const Trajectory& target_traj,
                             const WorldMap& map, const IsovistConfig& cfg,
                             int t_begin, int t_end);

}  // namespace chase
