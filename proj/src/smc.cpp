#include "chase/smc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "chase/parallel.hpp"

namespace chase {

ParticleSet init_particles(int K, const Point2& chaser_start) {
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  ParticleSet set;
  set.t = 1;
  set.particles.resize(static_cast<std::size_t>(K));
  for (auto& p : set.particles) {
    p.trajectory.t_first = 1;
    p.trajectory.positions = {chaser_start};
    p.weight = 1.0;
  }
  return set;
}

double WeightGrid::combined(int k) const {
  double sum = 0.0;
  for (int l = 0; l < L; ++l) {
    const std::size_t i = static_cast<std::size_t>(k * L + l);
    sum += w_chaser[i] * w_runner[i];
  }
  return sum / static_cast<double>(L);
}

double ess(std::span<const double> weights) {
  double sum = 0.0, sum_sq = 0.0;
  for (double w : weights) {
    sum += w;
    sum_sq += w * w;
  }
  if (sum_sq == 0.0) throw AllZeroWeights("ess: all weights are zero");
  return sum * sum / sum_sq;
}

std::vector<int> resample(std::span<const double> weights, int K,
                          RandomStream& rng, ResampleScheme scheme) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("resample: no weights");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w))
      throw std::invalid_argument("resample: weights must be finite and >= 0");
    total += w;
  }
  std::vector<int> ancestors(static_cast<std::size_t>(K));
  if (total == 0.0) {
    std::fprintf(stderr,
                 "warning: all particle weights zero; resampling uniformly\n");
    for (int k = 0; k < K; ++k)
      ancestors[static_cast<std::size_t>(k)] =
          static_cast<int>(rng.uniform_index(n));
    return ancestors;
  }
  // cumulative weights; inverse-CDF lookup
  std::vector<double> cum(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += weights[i];
    cum[i] = acc;
  }
  auto pick = [&](double u) {
    const auto it = std::lower_bound(cum.begin(), cum.end(), u * total);
    return static_cast<int>(std::min<std::size_t>(
        static_cast<std::size_t>(it - cum.begin()), n - 1));
  };
  if (scheme == ResampleScheme::Multinomial) {
    for (int k = 0; k < K; ++k)
      ancestors[static_cast<std::size_t>(k)] = pick(rng.uniform());
  } else {
    const double u0 = rng.uniform() / static_cast<double>(K);
    for (int k = 0; k < K; ++k)
      ancestors[static_cast<std::size_t>(k)] =
          pick(u0 + static_cast<double>(k) / static_cast<double>(K));
  }
  return ancestors;
}

namespace {

std::array<double, 5> quantiles(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  auto q = [&](double p) {
    if (v.size() == 1) return v[0];
    const double pos = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
  };
  return {v.front(), q(0.25), q(0.5), q(0.75), v.back()};
}

}  // namespace

StepStats step_stats_from_grid(const WeightGrid& grid, int t) {
  StepStats s;
  s.t = t;
  const std::size_t n = grid.w_runner.size();
  double sum_cr = 0.0, sum_r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_cr += grid.w_chaser[i] * grid.w_runner[i];
    sum_r += grid.w_runner[i];
  }
  const double kl = static_cast<double>(grid.K) * static_cast<double>(grid.L);
  s.log_z_chaser = sum_cr > 0.0 ? std::log(sum_cr / kl)
                                : -std::numeric_limits<double>::infinity();
  s.log_z_runner = sum_r > 0.0 ? std::log(sum_r / kl)
                               : -std::numeric_limits<double>::infinity();
  std::vector<double> combined(static_cast<std::size_t>(grid.K));
  for (int k = 0; k < grid.K; ++k)
    combined[static_cast<std::size_t>(k)] = grid.combined(k);
  double sum_c = 0.0;
  for (double w : combined) sum_c += w;
  if (sum_c > 0.0) {
    s.ess_chaser = ess(combined);
    s.ess_fraction = s.ess_chaser / static_cast<double>(grid.K);
  }
  s.weight_quantiles = quantiles(std::move(combined));
  return s;
}

StatsSeries aggregate_over_restarts(const std::vector<StatsSeries>& runs) {
  if (runs.empty()) return {};
  const std::size_t len = runs.front().size();
  for (const auto& r : runs) {
    if (r.size() != len)
      throw std::invalid_argument("aggregate_over_restarts: length mismatch");
  }
  StatsSeries out(len);
  const double r_count = static_cast<double>(runs.size());
  for (std::size_t i = 0; i < len; ++i) {
    StepStats& s = out[i];
    s.t = runs.front()[i].t;
    for (const auto& run : runs) {
      s.log_z_chaser += run[i].log_z_chaser / r_count;
      s.log_z_runner += run[i].log_z_runner / r_count;
      s.ess_chaser += run[i].ess_chaser / r_count;
      s.ess_fraction += run[i].ess_fraction / r_count;
      for (std::size_t q = 0; q < 5; ++q)
        s.weight_quantiles[q] += run[i].weight_quantiles[q] / r_count;
    }
  }
  return out;
}

EpisodeStepResult episode_step(const ParticleSet& state, const WorldMap& map,
                               const PlanningConfig& cfg, RunnerKind assumed,
                               std::uint64_t seed, ResampleScheme scheme,
                               int threads) {
  const int t = state.t + 1;
  if (t > cfg.horizon_T)
    throw std::invalid_argument("episode_step: past the horizon");
  const int K = static_cast<int>(state.particles.size());

  std::vector<WeightedTrajectory> extended(static_cast<std::size_t>(K));
  parallel_for(K, threads, [&](int k) {
    RandomStream rng = derive_stream(seed, "chaser", static_cast<std::uint64_t>(t),
                                     static_cast<std::uint64_t>(k));
    extended[static_cast<std::size_t>(k)] = chaser_query(
        map, state.particles[static_cast<std::size_t>(k)].trajectory, t, cfg,
        rng, assumed);
  });

  EpisodeStepResult result;
  result.grid.K = K;
  result.grid.L = cfg.L;
  result.grid.w_chaser.reserve(static_cast<std::size_t>(K * cfg.L));
  result.grid.w_runner.reserve(static_cast<std::size_t>(K * cfg.L));
  std::vector<double> weights(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const auto& p = extended[static_cast<std::size_t>(k)];
    weights[static_cast<std::size_t>(k)] = p.weight;
    result.grid.w_chaser.insert(result.grid.w_chaser.end(),
                                p.diag.chaser_factor.begin(),
                                p.diag.chaser_factor.end());
    result.grid.w_runner.insert(result.grid.w_runner.end(),
                                p.diag.runner_weights.begin(),
                                p.diag.runner_weights.end());
  }
  result.stats = step_stats_from_grid(result.grid, t);

  RandomStream res_rng =
      derive_stream(seed, "resample", static_cast<std::uint64_t>(t));
  std::vector<int> ancestors = resample(weights, K, res_rng, scheme);
  double mean = 0.0;
  for (double w : weights) mean += w;
  mean /= static_cast<double>(K);

  result.state.t = t;
  result.state.ancestor_history = state.ancestor_history;
  result.state.ancestor_history.push_back(ancestors);
  result.state.particles.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    result.state.particles[static_cast<std::size_t>(k)] =
        extended[static_cast<std::size_t>(ancestors[static_cast<std::size_t>(k)])];
    result.state.particles[static_cast<std::size_t>(k)].weight = mean;
  }
  return result;
}

}  // namespace chase
