#include "chase/rrt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chase {

RrtConfig RrtConfig::defaults_for(const WorldMap& map, int horizon) {
  RrtConfig cfg;
  const double diag = map.diagonal();
  cfg.step_size = 0.02 * diag;
  cfg.goal_tolerance = cfg.step_size;
  cfg.speed = diag / std::max(1, horizon);
  return cfg;
}

double PlannedPath::length() const {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
    len += distance(waypoints[i], waypoints[i + 1]);
  return len;
}

Point2 PlannedPath::point_along(double arclen) const {
  if (waypoints.empty()) throw std::invalid_argument("empty path");
  if (arclen <= 0.0) return waypoints.front();
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const double seg = distance(waypoints[i], waypoints[i + 1]);
    if (arclen <= seg) {
      if (seg == 0.0) return waypoints[i];
      return waypoints[i] + (waypoints[i + 1] - waypoints[i]) * (arclen / seg);
    }
    arclen -= seg;
  }
  return waypoints.back();
}

Trajectory Trajectory::slice(int t0, int t1) const {
  if (!covers(t0, t1) || t0 > t1)
    throw std::out_of_range("slice outside trajectory");
  Trajectory out;
  out.t_first = t0;
  out.positions.assign(positions.begin() + (t0 - t_first),
                       positions.begin() + (t1 - t_first + 1));
  return out;
}

Trajectory Trajectory::extended_by(const Trajectory& next) const {
  if (next.t_first != t_last() + 1)
    throw std::invalid_argument("trajectories are not contiguous");
  Trajectory out = *this;
  out.positions.insert(out.positions.end(), next.positions.begin(),
                       next.positions.end());
  return out;
}

Trajectory Trajectory::extended_by(const Point2& p) const {
  Trajectory out = *this;
  out.positions.push_back(p);
  return out;
}

namespace {

Point2 sample_free(const WorldMap& map, RandomStream& rng) {
  for (int i = 0; i < 1000; ++i) {
    Point2 p{rng.uniform(map.bounds_min().x, map.bounds_max().x),
             rng.uniform(map.bounds_min().y, map.bounds_max().y)};
    if (map.is_free(p)) return p;
  }
  throw PlanningFailure("could not sample a free point (map nearly full?)");
}

}  // namespace

PlannedPath rrt_plan(const WorldMap& map, const Point2& start,
                     const Point2& goal, const RrtConfig& cfg,
                     RandomStream& rng) {
  if (!map.is_free(start)) throw PlanningFailure("start is not in free space");
  if (!map.is_free(goal)) throw PlanningFailure("goal is not in free space");
  if (distance(start, goal) <= cfg.goal_tolerance) return {{start}};

  std::vector<Point2> nodes{start};
  std::vector<int> parent{-1};
  nodes.reserve(256);
  parent.reserve(256);

  for (int it = 0; it < cfg.max_iterations; ++it) {
    const Point2 target =
        rng.bernoulli(cfg.goal_bias) ? goal : sample_free(map, rng);

    // nearest node
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double d = distance(nodes[i], target);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best_d < 1e-12) continue;

    Point2 next = target;
    if (best_d > cfg.step_size)
      next = nodes[best] + (target - nodes[best]) * (cfg.step_size / best_d);
    if (!map.is_free(next)) continue;
    if (segment_blocked({nodes[best], next}, map.obstacles())) continue;

    nodes.push_back(next);
    parent.push_back(static_cast<int>(best));

    if (distance(next, goal) <= cfg.goal_tolerance) {
      PlannedPath path;
      for (int i = static_cast<int>(nodes.size()) - 1; i >= 0; i = parent[i])
        path.waypoints.push_back(nodes[i]);
      std::reverse(path.waypoints.begin(), path.waypoints.end());
      return path;
    }
  }
  throw PlanningFailure("rrt_plan: goal not reached within max_iterations");
}

PlannedPath shortcut_smooth(const PlannedPath& path, const WorldMap& map,
                            const RrtConfig& cfg, RandomStream& rng) {
  if (path.waypoints.size() <= 2 || cfg.smoothing_iterations <= 0) return path;
  PlannedPath cur = path;
  for (int it = 0; it < cfg.smoothing_iterations; ++it) {
    const double total = cur.length();
    if (total < 1e-12) break;
    double u = rng.uniform(0.0, total);
    double v = rng.uniform(0.0, total);
    if (u > v) std::swap(u, v);
    if (v - u < 1e-9) continue;
    const Point2 pa = cur.point_along(u);
    const Point2 pb = cur.point_along(v);
    const double direct = distance(pa, pb);
    if (direct + 1e-12 >= v - u) continue;  // no gain
    if (segment_blocked({pa, pb}, map.obstacles())) continue;

    // rebuild: prefix up to u, pa, pb, suffix after v
    PlannedPath next;
    double acc = 0.0;
    std::size_t i = 0;
    next.waypoints.push_back(cur.waypoints.front());
    for (; i + 1 < cur.waypoints.size(); ++i) {
      const double seg = distance(cur.waypoints[i], cur.waypoints[i + 1]);
      if (acc + seg >= u) break;
      acc += seg;
      next.waypoints.push_back(cur.waypoints[i + 1]);
    }
    next.waypoints.push_back(pa);
    next.waypoints.push_back(pb);
    // skip to the segment containing v
    acc = 0.0;
    for (std::size_t j = 0; j + 1 < cur.waypoints.size(); ++j) {
      const double seg = distance(cur.waypoints[j], cur.waypoints[j + 1]);
      if (acc + seg > v) {
        for (std::size_t k = j + 1; k < cur.waypoints.size(); ++k)
          next.waypoints.push_back(cur.waypoints[k]);
        break;
      }
      acc += seg;
    }
    // drop near-duplicate vertices
    PlannedPath dedup;
    for (const Point2& p : next.waypoints) {
      if (dedup.waypoints.empty() ||
          distance(dedup.waypoints.back(), p) > 1e-9)
        dedup.waypoints.push_back(p);
    }
    if (dedup.waypoints.size() < 2) dedup.waypoints = {cur.waypoints.front(), cur.waypoints.back()};
    if (dedup.length() <= cur.length()) cur = std::move(dedup);
  }
  return cur;
}

Trajectory discretize(const PlannedPath& path, const RrtConfig& cfg,
                      int t_first, int t_last) {
  if (t_first > t_last) throw std::invalid_argument("t_first > t_last");
  Trajectory traj;
  traj.t_first = t_first;
  traj.positions.reserve(static_cast<std::size_t>(t_last - t_first + 1));
  for (int t = t_first; t <= t_last; ++t) {
    const double s = cfg.speed * static_cast<double>(t - t_first);
    traj.positions.push_back(path.point_along(s));
  }
  return traj;
}

Trajectory hold_trajectory(const Point2& p, int t_first, int t_last) {
  Trajectory traj;
  traj.t_first = t_first;
  traj.positions.assign(static_cast<std::size_t>(t_last - t_first + 1), p);
  return traj;
}

}  // namespace chase
