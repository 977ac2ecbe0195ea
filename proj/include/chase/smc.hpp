#pragma once

#include <array>
#include <span>
#include <vector>

#include "chase/nested_models.hpp"

namespace chase {

struct AllZeroWeights : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ResampleScheme { Multinomial, Systematic };

// SMC state: K chaser trajectory prefixes over 1..t plus the ancestry of
// every resampling round.
struct ParticleSet {
  std::vector<WeightedTrajectory> particles;
  int t = 1;
  std::vector<std::vector<int>> ancestor_history;
};

ParticleSet init_particles(int K, const Point2& chaser_start);

// K x L weight grids for one SMC step, row-major (k * L + l).
struct WeightGrid {
  int K = 0;
  int L = 0;
  std::vector<double> w_chaser;  // exp(alpha * T^{C,k,l}_visible)
  std::vector<double> w_runner;  // w^{R,k,l}

  double combined(int k) const;  // (1/L) sum_l w_chaser * w_runner
};

// Pre-resampling estimator diagnostics for one step.
struct StepStats {
  int t = 0;
  double log_z_chaser = 0.0;  // log[(1/KL) sum_{k,l} w_c * w_r]
  double log_z_runner = 0.0;  // log[(1/KL) sum_{k,l} w_r]
  double ess_chaser = 0.0;    // over the K combined weights
  double ess_fraction = 0.0;  // ess / K
  std::array<double, 5> weight_quantiles{};  // min, q25, median, q75, max
};

using StatsSeries = std::vector<StepStats>;

// (sum w)^2 / sum w^2. Throws AllZeroWeights when every weight is zero.
double ess(std::span<const double> weights);

// Returns K ancestor indices. Multinomial: i.i.d. categorical draws.
// Systematic: stratified low-variance alternative. All-zero weights fall
// back to uniform resampling with a warning.
std::vector<int> resample(std::span<const double> weights, int K,
                          RandomStream& rng,
                          ResampleScheme scheme = ResampleScheme::Multinomial);

StepStats step_stats_from_grid(const WeightGrid& grid, int t);

// Field-wise mean across restarts; all series must share length and times.
StatsSeries aggregate_over_restarts(const std::vector<StatsSeries>& runs);

// One EPISODE step: extend each particle via chaser_query (per-particle
// streams derived from (seed, t, k)), record pre-resampling statistics,
// then resample and set every weight to the pre-resampling mean.
struct EpisodeStepResult {
  ParticleSet state;
  StepStats stats;
  WeightGrid grid;
};

EpisodeStepResult episode_step(const ParticleSet& state, const WorldMap& map,
                               const PlanningConfig& cfg, RunnerKind assumed,
                               std::uint64_t seed,
                               ResampleScheme scheme = ResampleScheme::Multinomial,
                               int threads = 1);

}  // namespace chase
