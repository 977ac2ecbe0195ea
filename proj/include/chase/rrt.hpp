#pragma once

#include <stdexcept>
#include <vector>

#include "chase/rng.hpp"
#include "chase/world_map.hpp"

namespace chase {

struct PlanningFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RrtConfig {
  double step_size = 2.0;
  double goal_bias = 0.05;
  double goal_tolerance = 2.0;
  int max_iterations = 5000;
  int smoothing_iterations = 100;
  double speed = 5.0;  // map units per time step

  // step_size/tolerance = 2% of the diagonal; speed set so a map crossing
  // takes roughly `horizon` steps.
  static RrtConfig defaults_for(const WorldMap& map, int horizon);
};

struct PlannedPath {
  std::vector<Point2> waypoints;  // >= 1; consecutive segments obstacle-free

  double length() const;
  // Point at the given arc length from the start, clamped to [0, length].
  Point2 point_along(double arclen) const;
};

// Time-indexed positions over [t_first, t_first + positions.size() - 1].
struct Trajectory {
  int t_first = 1;
  std::vector<Point2> positions;

  int t_last() const { return t_first + static_cast<int>(positions.size()) - 1; }
  bool covers(int t0, int t1) const { return t_first <= t0 && t1 <= t_last(); }

  const Point2& at(int t) const {
    if (!covers(t, t))
      throw std::out_of_range("trajectory does not cover time " +
                              std::to_string(t));
    return positions[static_cast<std::size_t>(t - t_first)];
  }

  const Point2& back() const { return positions.back(); }

  // Sub-trajectory over [t0, t1].
  Trajectory slice(int t0, int t1) const;
  // This trajectory followed by `next`; next.t_first must equal t_last()+1.
  Trajectory extended_by(const Trajectory& next) const;
  Trajectory extended_by(const Point2& p) const;
};

// Holonomic RRT: nearest-node extension by step_size toward a uniform
// free-space sample, goal-biased. Stochastic; every call with a fresh
// stream yields a different feasible path. Throws PlanningFailure when the
// goal is not reached within max_iterations.
PlannedPath rrt_plan(const WorldMap& map, const Point2& start,
                     const Point2& goal, const RrtConfig& cfg,
                     RandomStream& rng);

// Random shortcut smoothing. Never lengthens the path; endpoints unchanged.
PlannedPath shortcut_smooth(const PlannedPath& path, const WorldMap& map,
                            const RrtConfig& cfg, RandomStream& rng);

// Constant-speed arc-length resampling at cfg.speed per step; holds the
// final position once the path end is reached.
Trajectory discretize(const PlannedPath& path, const RrtConfig& cfg,
                      int t_first, int t_last);

// Hold-in-place trajectory (PlanningFailure fallback).
Trajectory hold_trajectory(const Point2& p, int t_first, int t_last);

}  // namespace chase
