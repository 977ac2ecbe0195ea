#pragma once

#include "chase/smc.hpp"

namespace chase {

struct ScenarioConfig {
  AgentVariant variant;
  PlanningConfig planning;
  std::uint64_t base_seed = 0;
  std::string map_id = "map";
  int restarts = 1;
  ResampleScheme scheme = ResampleScheme::Multinomial;
  int threads = 1;
  bool fov360_override = false;      // sensitivity check: ignore the cone
  bool argmax_execution = false;     // execute the max-weight particle
  bool terminate_on_detection = true;
  bool keep_grids = false;           // retain raw K x L weight grids
  // Pin the true runner's hidden start/goal (waypoint names).
  std::optional<std::string> true_runner_start;
  std::optional<std::string> true_runner_goal;
};

struct BeliefSample {
  Point2 pos;
  double weight = 0.0;
};

struct BeliefSnapshot {
  int t = 0;
  std::vector<BeliefSample> samples;  // imagined runner positions at step t
};

struct EpisodeRecord {
  Trajectory chaser_executed;  // 1..T, truncated at detection
  Trajectory runner_executed;
  bool detected = false;
  std::optional<int> detection_time;
  std::string runner_start_name;
  std::string runner_goal_name;
  StatsSeries per_step_stats;
  std::vector<BeliefSnapshot> beliefs;
  std::vector<WeightGrid> grids;  // only when keep_grids
};

// One ground-truth episode: true runner vs planning chaser. The runner
// knows the chaser's executed past; the chaser plans with its particle set
// and aims its detection cone at its max-weight belief sample.
EpisodeRecord run_episode(const WorldMap& map, const ScenarioConfig& scenario,
                          std::uint64_t seed);

struct DetectionCell {
  ChaserKind chaser_kind;
  RunnerKind runner_kind;
  int detections = 0;
  int restarts = 0;
  double rate = 0.0;
};

struct DetectionTable {
  std::vector<DetectionCell> cells;  // the four variants, fixed order
};

// Table-1-style experiment over the four agent-model variants.
DetectionTable detection_experiment(const WorldMap& map,
                                    const ScenarioConfig& base,
                                    std::vector<EpisodeRecord>* records = nullptr);

struct BudgetRunConfig {
  int total_budget = 2048;
  std::vector<std::pair<int, int>> pairs;  // (K, L); each K*L == total_budget
  int restarts = 10;
  int horizon = 28;

  static std::vector<std::pair<int, int>> default_pairs();
  void validate() const;
};

struct BudgetCell {
  int K = 0;
  int L = 0;
  std::vector<StatsSeries> per_restart;
  std::vector<std::vector<WeightGrid>> raw_grids;  // [restart][step]
  StatsSeries aggregated;
};

struct BudgetResult {
  std::vector<BudgetCell> cells;
};

// Sample-budget study: full chaser-runner model, no detection termination,
// full-horizon estimator diagnostics per (K, L) pair and restart.
BudgetResult budget_experiment(const WorldMap& map, const BudgetRunConfig& cfg,
                               const ScenarioConfig& base);

}  // namespace chase
