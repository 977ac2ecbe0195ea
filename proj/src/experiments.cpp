#include "chase/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "chase/parallel.hpp"

namespace chase {

namespace {

// One move of the true runner. The smarter runner re-plans each step
// against the chaser's executed past; the naive runner follows the
// trajectory committed at t = 1 (passed in as `committed`).
Point2 true_runner_move(const WorldMap& map, const ScenarioConfig& sc,
                        const Trajectory& committed,
                        const Trajectory& runner_past,
                        const Trajectory& chaser_past, const Point2& goal,
                        int t, std::uint64_t seed) {
  const PlanningConfig& cfg = sc.planning;
  if (sc.variant.runner_kind == RunnerKind::Naive) return committed.at(t);

  // The true runner's own deliberation budget: enough candidate routes that
  // the visibility weighting can actually pick an evasive one. Independent
  // of the chaser's inference budget (K, L).
  const int candidates = std::max(32, cfg.L);
  std::vector<Trajectory> futures;
  std::vector<double> weights;
  futures.reserve(static_cast<std::size_t>(candidates));
  weights.reserve(static_cast<std::size_t>(candidates));
  for (int j = 0; j < candidates; ++j) {
    RandomStream rng = derive_stream(seed, "true-runner",
                                     static_cast<std::uint64_t>(t),
                                     static_cast<std::uint64_t>(j));
    const Point2 via = map.sample_waypoint(rng).pos;
    Trajectory future = plan_future_via(map, runner_past.at(t - 1), via, goal,
                                        runner_planning(cfg), rng, t - 1,
                                        cfg.horizon_T)
                            .slice(t, cfg.horizon_T);
    const Trajectory full = runner_past.slice(1, t - 1).extended_by(future);
    const int M = std::max(1, cfg.runner_evasion_samples);
    double sum = 0.0;
    for (int m = 0; m < M; ++m) {
      WeightedTrajectory imagined =
          naive_chaser_query(map, chaser_past.at(t - 1), t, cfg, rng);
      const Trajectory observer =
          chaser_past.slice(1, t - 1).extended_by(imagined.trajectory);
      const VisibilityCount vis =
          time_visible(observer, full, map, cfg.isovist, 1, cfg.horizon_T);
      sum += std::exp(-cfg.alpha * vis.steps_visible);
    }
    futures.push_back(std::move(future));
    weights.push_back(sum / static_cast<double>(M));
  }
  RandomStream pick =
      derive_stream(seed, "true-runner-pick", static_cast<std::uint64_t>(t));
  const std::vector<int> chosen = resample(weights, 1, pick);
  return futures[static_cast<std::size_t>(chosen[0])].at(t);
}

}  // namespace

EpisodeRecord run_episode(const WorldMap& map, const ScenarioConfig& sc,
                          std::uint64_t seed) {
  const PlanningConfig& cfg = sc.planning;
  EpisodeRecord rec;

  RandomStream init = derive_stream(seed, "runner-init");
  auto pinned = [&](const std::string& name) -> const Waypoint& {
    const Waypoint* w = map.find_waypoint(name);
    if (!w) throw std::invalid_argument("unknown waypoint: " + name);
    return *w;
  };
  const Waypoint& r_start = sc.true_runner_start
                                ? pinned(*sc.true_runner_start)
                                : map.sample_waypoint(init);
  const Waypoint& r_goal = sc.true_runner_goal
                               ? pinned(*sc.true_runner_goal)
                               : sample_trip_goal(map, r_start, init);
  rec.runner_start_name = r_start.name;
  rec.runner_goal_name = r_goal.name;

  Trajectory committed;  // naive runner's plan, drawn once
  if (sc.variant.runner_kind == RunnerKind::Naive) {
    RandomStream commit = derive_stream(seed, "runner-commit");
    committed = plan_future(map, r_start.pos, r_goal.pos, runner_planning(cfg),
                            commit, 1, cfg.horizon_T);
  }

  rec.chaser_executed.t_first = 1;
  rec.chaser_executed.positions = {map.chaser_start()};
  rec.runner_executed.t_first = 1;
  rec.runner_executed.positions = {r_start.pos};

  ParticleSet particles = init_particles(cfg.K, map.chaser_start());
  const RunnerKind assumed = assumed_runner(sc.variant.chaser_kind);

  IsovistConfig detect_cfg = cfg.isovist;
  if (sc.fov360_override) detect_cfg.fov_half_angle = kPi;

  for (int t = 2; t <= cfg.horizon_T; ++t) {
    // (1) true runner advances
    const Point2 runner_t =
        true_runner_move(map, sc, committed, rec.runner_executed,
                         rec.chaser_executed, r_goal.pos, t, seed);

    // (2) one SMC step; execute one particle's move
    EpisodeStepResult step =
        episode_step(particles, map, cfg, assumed, seed, sc.scheme, sc.threads);
    std::size_t exec_idx;
    if (sc.argmax_execution) {
      exec_idx = 0;
      double best = -1.0;
      for (int k = 0; k < step.grid.K; ++k) {
        const double w = step.grid.combined(k);
        if (w > best) {
          best = w;
          // resampled set is a permutation of ancestors; find a particle
          // descended from k
          for (std::size_t i = 0; i < step.state.particles.size(); ++i) {
            if (step.state.ancestor_history.back()[i] == k) exec_idx = i;
          }
        }
      }
    } else {
      RandomStream exec =
          derive_stream(seed, "exec", static_cast<std::uint64_t>(t));
      exec_idx = exec.uniform_index(step.state.particles.size());
    }
    const WeightedTrajectory& chosen = step.state.particles[exec_idx];
    const Point2 chaser_t = chosen.trajectory.at(t);

    rec.per_step_stats.push_back(step.stats);
    if (sc.keep_grids) rec.grids.push_back(step.grid);

    // belief snapshot: the chosen particle's imagined runner positions;
    // the aim direction pools belief over all particles (the chaser moves
    // along one sampled plan but points its sight using the full posterior)
    BeliefSnapshot snap;
    snap.t = t;
    for (std::size_t l = 0; l < chosen.diag.runner_at_t.size(); ++l) {
      const double w =
          chosen.diag.chaser_factor[l] * chosen.diag.runner_weights[l];
      snap.samples.push_back({chosen.diag.runner_at_t[l], w});
    }
    rec.beliefs.push_back(std::move(snap));
    double best_w = -1.0;
    Point2 aim = chaser_t;
    for (const WeightedTrajectory& p : step.state.particles) {
      for (std::size_t l = 0; l < p.diag.runner_at_t.size(); ++l) {
        const double w =
            p.weight * p.diag.chaser_factor[l] * p.diag.runner_weights[l];
        if (w > best_w) {
          best_w = w;
          aim = p.diag.runner_at_t[l];
        }
      }
    }

    rec.chaser_executed.positions.push_back(chaser_t);
    rec.runner_executed.positions.push_back(runner_t);

    // (3) detection: aim at the max-weight belief sample; co-location in
    // the previous step also counts
    const bool colocated =
        distance(rec.chaser_executed.at(t - 1), rec.runner_executed.at(t - 1)) <
        1e-12;
    if (sc.terminate_on_detection &&
        (colocated || is_visible(map, chaser_t, runner_t, aim, detect_cfg))) {
      rec.detected = true;
      rec.detection_time = t;
      break;
    }

    // collapse: every particle continues from the executed prefix
    for (auto& p : particles.particles) {
      p.trajectory = rec.chaser_executed;
      p.weight = chosen.weight;
    }
    particles.t = t;
    particles.ancestor_history = step.state.ancestor_history;
  }
  return rec;
}

DetectionTable detection_experiment(const WorldMap& map,
                                    const ScenarioConfig& base,
                                    std::vector<EpisodeRecord>* records) {
  const std::array<AgentVariant, 4> variants{{
      {ChaserKind::Smart, RunnerKind::Naive},
      {ChaserKind::Smart, RunnerKind::Smarter},
      {ChaserKind::Smartest, RunnerKind::Naive},
      {ChaserKind::Smartest, RunnerKind::Smarter},
  }};
  const int R = base.restarts;
  std::vector<EpisodeRecord> all(static_cast<std::size_t>(4 * R));
  parallel_for(4 * R, base.threads, [&](int i) {
    const int v = i / R;
    const int r = i % R;
    ScenarioConfig sc = base;
    sc.variant = variants[static_cast<std::size_t>(v)];
    sc.threads = 1;  // parallelism is across episodes here
    const std::uint64_t seed =
        derive_stream(base.base_seed, "detect", static_cast<std::uint64_t>(v),
                      static_cast<std::uint64_t>(r))
            .next_u64();
    all[static_cast<std::size_t>(i)] = run_episode(map, sc, seed);
  });

  DetectionTable table;
  for (int v = 0; v < 4; ++v) {
    DetectionCell cell;
    cell.chaser_kind = variants[static_cast<std::size_t>(v)].chaser_kind;
    cell.runner_kind = variants[static_cast<std::size_t>(v)].runner_kind;
    cell.restarts = R;
    for (int r = 0; r < R; ++r) {
      if (all[static_cast<std::size_t>(v * R + r)].detected) ++cell.detections;
    }
    cell.rate = static_cast<double>(cell.detections) / static_cast<double>(R);
    table.cells.push_back(cell);
  }
  if (records) *records = std::move(all);
  return table;
}

std::vector<std::pair<int, int>> BudgetRunConfig::default_pairs() {
  return {{2048, 1}, {512, 4}, {128, 16}, {64, 32}, {32, 64}, {16, 128}, {4, 512}};
}

void BudgetRunConfig::validate() const {
  if (pairs.empty()) throw std::invalid_argument("budget: no (K, L) pairs");
  for (const auto& [k, l] : pairs) {
    if (k < 1 || l < 1 || k * l != total_budget)
      throw std::invalid_argument("budget: pair " + std::to_string(k) + "x" +
                                  std::to_string(l) + " does not multiply to " +
                                  std::to_string(total_budget));
  }
  if (restarts < 1) throw std::invalid_argument("budget: restarts must be >= 1");
}

BudgetResult budget_experiment(const WorldMap& map, const BudgetRunConfig& cfg,
                               const ScenarioConfig& base) {
  cfg.validate();
  BudgetResult result;
  result.cells.resize(cfg.pairs.size());
  const int P = static_cast<int>(cfg.pairs.size());
  const int R = cfg.restarts;
  for (int p = 0; p < P; ++p) {
    auto& cell = result.cells[static_cast<std::size_t>(p)];
    cell.K = cfg.pairs[static_cast<std::size_t>(p)].first;
    cell.L = cfg.pairs[static_cast<std::size_t>(p)].second;
    cell.per_restart.resize(static_cast<std::size_t>(R));
    cell.raw_grids.resize(static_cast<std::size_t>(R));
  }
  parallel_for(P * R, base.threads, [&](int i) {
    const int p = i / R;
    const int r = i % R;
    ScenarioConfig sc = base;
    sc.variant = {ChaserKind::Smartest, RunnerKind::Smarter};  // full model
    sc.planning.K = result.cells[static_cast<std::size_t>(p)].K;
    sc.planning.L = result.cells[static_cast<std::size_t>(p)].L;
    sc.planning.horizon_T = cfg.horizon;
    sc.terminate_on_detection = false;
    sc.keep_grids = true;
    sc.threads = 1;
    const std::uint64_t seed =
        derive_stream(base.base_seed, "budget", static_cast<std::uint64_t>(p),
                      static_cast<std::uint64_t>(r))
            .next_u64();
    EpisodeRecord rec = run_episode(map, sc, seed);
    auto& cell = result.cells[static_cast<std::size_t>(p)];
    cell.per_restart[static_cast<std::size_t>(r)] = rec.per_step_stats;
    cell.raw_grids[static_cast<std::size_t>(r)] = std::move(rec.grids);
  });
  for (auto& cell : result.cells)
    cell.aggregated = aggregate_over_restarts(cell.per_restart);
  return result;
}

}  // namespace chase
