#include "chase/nested_models.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace chase {

std::string to_string(ChaserKind k) {
  return k == ChaserKind::Smart ? "smart" : "smartest";
}
std::string to_string(RunnerKind k) {
  return k == RunnerKind::Naive ? "naive" : "smarter";
}
ChaserKind chaser_kind_from_string(const std::string& s) {
  if (s == "smart") return ChaserKind::Smart;
  if (s == "smartest") return ChaserKind::Smartest;
  throw std::invalid_argument("unknown chaser kind: " + s);
}
RunnerKind runner_kind_from_string(const std::string& s) {
  if (s == "naive") return RunnerKind::Naive;
  if (s == "smarter") return RunnerKind::Smarter;
  throw std::invalid_argument("unknown runner kind: " + s);
}


namespace {
const Waypoint& pinned_waypoint(const WorldMap& map, const std::string& name) {
  const Waypoint* w = map.find_waypoint(name);
  if (!w) throw std::invalid_argument("unknown pinned waypoint: " + name);
  return *w;
}

}  // namespace

const Waypoint& sample_trip_goal(const WorldMap& map, const Waypoint& start,
                                 RandomStream& rng) {
  // runner trips must cover real distance: a goal drawn next to (or equal
  // to) the start parks the runner for most of the episode
  const double min_sep = 0.4 * map.diagonal();
  std::vector<const Waypoint*> eligible;
  for (const Waypoint& w : map.waypoints())
    if (distance(w.pos, start.pos) >= min_sep) eligible.push_back(&w);
  if (eligible.empty())
    for (const Waypoint& w : map.waypoints())
      if (&w != &start) eligible.push_back(&w);
  if (eligible.empty()) return start;
  return *eligible[rng.uniform_index(eligible.size())];
}

Trajectory plan_future_via(const WorldMap& map, const Point2& start,
                           const Point2& via, const Point2& goal,
                           const PlanningConfig& cfg, RandomStream& rng,
                           int t_first, int t_last, bool* fell_back) {
  if (fell_back) *fell_back = false;
  try {
    PlannedPath leg1 = shortcut_smooth(rrt_plan(map, start, via, cfg.rrt, rng),
                                       map, cfg.rrt, rng);
    PlannedPath leg2 = shortcut_smooth(
        rrt_plan(map, leg1.waypoints.back(), goal, cfg.rrt, rng), map, cfg.rrt,
        rng);
    PlannedPath joined = leg1;
    joined.waypoints.insert(joined.waypoints.end(),
                            leg2.waypoints.begin() + 1, leg2.waypoints.end());
    return discretize(joined, cfg.rrt, t_first, t_last);
  } catch (const PlanningFailure&) {
    // fall back to a direct plan (which has its own fallback chain)
    return plan_future(map, start, goal, cfg, rng, t_first, t_last, fell_back);
  }
}

PlanningConfig PlanningConfig::defaults_for(const WorldMap& map, int horizon) {
  PlanningConfig cfg;
  cfg.horizon_T = horizon;
  cfg.rrt = RrtConfig::defaults_for(map, horizon);
  cfg.isovist.sight_range = 0.25 * map.diagonal();
  return cfg;
}

Trajectory plan_future(const WorldMap& map, const Point2& start,
                       const Point2& goal, const PlanningConfig& cfg,
                       RandomStream& rng, int t_first, int t_last,
                       bool* fell_back) {
  if (fell_back) *fell_back = false;
  PlannedPath path;
  try {
    path = rrt_plan(map, start, goal, cfg.rrt, rng);
  } catch (const PlanningFailure&) {
    RrtConfig retry = cfg.rrt;
    retry.max_iterations *= 2;
    try {
      path = rrt_plan(map, start, goal, retry, rng);
    } catch (const PlanningFailure& e) {
      std::fprintf(stderr, "warning: %s; holding in place\n", e.what());
      if (fell_back) *fell_back = true;
      return hold_trajectory(start, t_first, t_last);
    }
  }
  path = shortcut_smooth(path, map, cfg.rrt, rng);
  return discretize(path, cfg.rrt, t_first, t_last);
}

WeightedTrajectory naive_chaser_query(const WorldMap& map,
                                      const Point2& x_c_prev, int t,
                                      const PlanningConfig& cfg,
                                      RandomStream& rng) {
  WeightedTrajectory out;
  const Waypoint& goal = cfg.pin_chaser_goal
                             ? pinned_waypoint(map, *cfg.pin_chaser_goal)
                             : map.sample_waypoint(rng);
  out.diag.goal_name = goal.name;
  // plan from x^C_{t-1}; the returned slice covers t..T, so the first
  // returned position is already one step along the path
  Trajectory full = plan_future(map, x_c_prev, goal.pos, cfg, rng, t - 1,
                                cfg.horizon_T, &out.diag.used_fallback);
  out.trajectory = full.slice(t, cfg.horizon_T);
  out.weight = 1.0;
  return out;
}

WeightedTrajectory runner_query(const WorldMap& map,
                                const Trajectory& chaser_past, int t,
                                const PlanningConfig& cfg, RandomStream& rng,
                                RunnerKind kind) {
  if (!chaser_past.covers(1, t - 1))
    throw std::invalid_argument("runner_query: chaser_past must cover 1..t-1");
  WeightedTrajectory out;
  const Waypoint& start = cfg.pin_runner_start
                              ? pinned_waypoint(map, *cfg.pin_runner_start)
                              : map.sample_waypoint(rng);
  const Waypoint& goal = cfg.pin_runner_goal
                             ? pinned_waypoint(map, *cfg.pin_runner_goal)
                             : sample_trip_goal(map, start, rng);
  out.diag.start_name = start.name;
  out.diag.goal_name = goal.name;
  Trajectory runner_full;
  const PlanningConfig rcfg = runner_planning(cfg);
  if (kind == RunnerKind::Smarter) {
    // route through a random intermediate waypoint: gives the visibility
    // weight genuinely distinct routes to choose among (a via equal to the
    // start or goal degenerates to the direct route)
    const Point2 via = map.sample_waypoint(rng).pos;
    runner_full = plan_future_via(map, start.pos, via, goal.pos, rcfg, rng, 1,
                                  cfg.horizon_T, &out.diag.used_fallback);
  } else {
    runner_full = plan_future(map, start.pos, goal.pos, rcfg, rng, 1,
                              cfg.horizon_T, &out.diag.used_fallback);
  }
  out.diag.full_path = runner_full;
  out.trajectory = runner_full.slice(t, cfg.horizon_T);

  if (kind == RunnerKind::Naive) {
    out.weight = 1.0;
    return out;
  }

  // imagined chasers continue from the known past; averaging the penalty
  // over several imagined futures keeps one lucky draw from letting an
  // exposed route through
  const int M = std::max(1, cfg.runner_evasion_samples);
  double sum = 0.0;
  for (int m = 0; m < M; ++m) {
    WeightedTrajectory imagined =
        naive_chaser_query(map, chaser_past.at(t - 1), t, cfg, rng);
    const Trajectory observer =
        chaser_past.slice(1, t - 1).extended_by(imagined.trajectory);
    const VisibilityCount vis =
        time_visible(observer, runner_full, map, cfg.isovist, 1, cfg.horizon_T);
    out.diag.steps_visible = vis.steps_visible;
    sum += std::exp(-cfg.alpha * vis.steps_visible) * imagined.weight;
  }
  out.weight = sum / static_cast<double>(M);
  return out;
}

double chaser_weight_for_future(const WorldMap& map,
                                const Trajectory& chaser_past,
                                const Trajectory& future, int t,
                                const PlanningConfig& cfg, RandomStream& rng,
                                RunnerKind kind, QueryDiagnostics* diag) {
  double sum = 0.0;
  for (int l = 0; l < cfg.L; ++l) {
    WeightedTrajectory runner = runner_query(map, chaser_past, t, cfg, rng, kind);
    const VisibilityCount vis = time_visible(future, runner.trajectory, map,
                                             cfg.isovist, t, cfg.horizon_T);
    const double chaser_factor = std::exp(cfg.alpha * vis.steps_visible);
    sum += chaser_factor * runner.weight;
    if (diag) {
      diag->chaser_factor.push_back(chaser_factor);
      diag->runner_weights.push_back(runner.weight);
      diag->chaser_vis_counts.push_back(vis.steps_visible);
      diag->runner_at_t.push_back(runner.trajectory.at(t));
    }
  }
  return sum / static_cast<double>(cfg.L);
}

WeightedTrajectory chaser_query(const WorldMap& map,
                                const Trajectory& chaser_past, int t,
                                const PlanningConfig& cfg, RandomStream& rng,
                                RunnerKind kind) {
  if (!chaser_past.covers(1, t - 1))
    throw std::invalid_argument("chaser_query: chaser_past must cover 1..t-1");
  WeightedTrajectory out;
  const Waypoint& goal = cfg.pin_chaser_goal
                             ? pinned_waypoint(map, *cfg.pin_chaser_goal)
                             : map.sample_waypoint(rng);
  out.diag.goal_name = goal.name;
  const Trajectory future =
      plan_future(map, chaser_past.at(t - 1), goal.pos, cfg, rng, t - 1,
                  cfg.horizon_T, &out.diag.used_fallback)
          .slice(t, cfg.horizon_T);
  out.diag.full_path = future;
  out.weight = chaser_weight_for_future(map, chaser_past, future, t, cfg, rng,
                                        kind, &out.diag);
  // keep only the next step; the rest of the future lives in diagnostics
  out.trajectory = chaser_past.slice(1, t - 1).extended_by(future.at(t));
  return out;
}

}  // namespace chase
