#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chase/isovist.hpp"
#include "chase/rrt.hpp"

namespace chase {

enum class RunnerKind { Naive, Smarter };
enum class ChaserKind { Smart, Smartest };

// The chaser's internal runner model: a smart chaser assumes a naive
// runner, the smartest chaser assumes the nested (smarter) runner.
inline RunnerKind assumed_runner(ChaserKind k) {
  return k == ChaserKind::Smart ? RunnerKind::Naive : RunnerKind::Smarter;
}

struct AgentVariant {
  ChaserKind chaser_kind = ChaserKind::Smart;
  RunnerKind runner_kind = RunnerKind::Naive;
};

std::string to_string(ChaserKind k);
std::string to_string(RunnerKind k);
ChaserKind chaser_kind_from_string(const std::string& s);
RunnerKind runner_kind_from_string(const std::string& s);

struct PlanningConfig {
  double alpha = 1.0;
  int horizon_T = 20;
  int K = 64;
  int L = 8;
  IsovistConfig isovist;
  RrtConfig rrt;
  // the runner moves slightly slower than the chaser, so pursuit can close
  // distance; applies to every runner trajectory (real or imagined)
  double runner_speed_factor = 0.8;
  // imagined chaser futures averaged over in the smarter runner's evasion
  // weight; 1 recovers the single-sample form exp(-alpha * T_visible)
  int runner_evasion_samples = 4;

  // Conditioning mode: pin the uniform waypoint draws by name.
  std::optional<std::string> pin_runner_start;
  std::optional<std::string> pin_runner_goal;
  std::optional<std::string> pin_chaser_goal;

  static PlanningConfig defaults_for(const WorldMap& map, int horizon);
};

// Copy of cfg with the RRT speed scaled down for runner trajectories.
inline PlanningConfig runner_planning(const PlanningConfig& cfg) {
  PlanningConfig r = cfg;
  r.rrt.speed = cfg.rrt.speed * cfg.runner_speed_factor;
  return r;
}

// Per-query bookkeeping: visibility counts, goal drawn, nested weights.
struct QueryDiagnostics {
  std::string goal_name;
  std::string start_name;       // runner queries only
  int steps_visible = 0;        // the query's own T_visible
  bool used_fallback = false;   // a planner fallback was taken somewhere
  Trajectory full_path;         // runner: full 1..T path; chaser: future t..T
  // chaser query, per l:
  std::vector<double> chaser_factor;      // exp(alpha * T^{C,l}_visible)
  std::vector<double> runner_weights;     // w^{R,l}
  std::vector<int> chaser_vis_counts;     // T^{C,l}_visible
  std::vector<Point2> runner_at_t;        // imagined runner position at step t
};

struct WeightedTrajectory {
  Trajectory trajectory;
  double weight = 1.0;
  QueryDiagnostics diag;
};

// Inner model: unconditioned goal draw plus RRT plan over steps t..T from
// the chaser's previous position. Weight is always 1.
WeightedTrajectory naive_chaser_query(const WorldMap& map,
                                      const Point2& x_c_prev, int t,
                                      const PlanningConfig& cfg,
                                      RandomStream& rng);

// Middle model. Smarter kind: runner draws start/goal, plans over 1..T,
// imagines a naive chaser over t..T, and weights by exp(-alpha * steps the
// runner is visible to {chaser past, imagined future}) over 1..T. Naive
// kind: same trajectory draw, weight 1. Returned trajectory is the future
// slice t..T; the full path is kept in diagnostics.
WeightedTrajectory runner_query(const WorldMap& map,
                                const Trajectory& chaser_past, int t,
                                const PlanningConfig& cfg, RandomStream& rng,
                                RunnerKind kind);

// Average-weight estimate for a fixed candidate chaser future: draws L
// runner samples and returns (1/L) sum_l exp(alpha*T^{C,l}_vis) * w^{R,l}.
double chaser_weight_for_future(const WorldMap& map,
                                const Trajectory& chaser_past,
                                const Trajectory& future, int t,
                                const PlanningConfig& cfg, RandomStream& rng,
                                RunnerKind kind, QueryDiagnostics* diag);

// Outer model: draws a goal and a candidate future t..T, scores it against
// L imagined runners, and returns chaser_past extended by the single next
// step x^C_t, with the rest of the future kept in diagnostics.
WeightedTrajectory chaser_query(const WorldMap& map,
                                const Trajectory& chaser_past, int t,
                                const PlanningConfig& cfg, RandomStream& rng,
                                RunnerKind kind);

// rrt_plan with the fallback policy: retry once with a doubled iteration
// budget, then hold in place with a warning on stderr.
Trajectory plan_future(const WorldMap& map, const Point2& start,
                       const Point2& goal, const PlanningConfig& cfg,
                       RandomStream& rng, int t_first, int t_last,
                       bool* fell_back = nullptr);

// Runner goal draw: uniform over waypoints at least 0.4 x diagonal from
// the start (all other waypoints if none qualify), so trips cover real
// distance instead of parking next to the start.
const Waypoint& sample_trip_goal(const WorldMap& map, const Waypoint& start,
                                 RandomStream& rng);

// Two-leg plan start -> via -> goal (smarter-runner route diversity).
// Falls back to the direct plan when a leg is infeasible.
Trajectory plan_future_via(const WorldMap& map, const Point2& start,
                           const Point2& via, const Point2& goal,
                           const PlanningConfig& cfg, RandomStream& rng,
                           int t_first, int t_last,
                           bool* fell_back = nullptr);

}  // namespace chase
