#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "chase/nested_models.hpp"

#ifndef CHASE_MAPS_DIR
#define CHASE_MAPS_DIR "maps"
#endif

using namespace chase;

namespace {

WorldMap ten_waypoint_map() {
  return WorldMap::load_file(std::string(CHASE_MAPS_DIR) +
                             "/bremen_like.map.json");
}

WorldMap small_map() {
  return WorldMap::load_file(std::string(CHASE_MAPS_DIR) +
                             "/empty_square.map.json");
}

PlanningConfig small_cfg(const WorldMap& map, int T) {
  PlanningConfig cfg = PlanningConfig::defaults_for(map, T);
  cfg.horizon_T = T;
  return cfg;
}

}  // namespace

TEST_CASE("kind round-trips") {
  CHECK(to_string(ChaserKind::Smart) == "smart");
  CHECK(to_string(ChaserKind::Smartest) == "smartest");
  CHECK(to_string(RunnerKind::Naive) == "naive");
  CHECK(to_string(RunnerKind::Smarter) == "smarter");
  CHECK(chaser_kind_from_string("smartest") == ChaserKind::Smartest);
  CHECK(runner_kind_from_string("smarter") == RunnerKind::Smarter);
  CHECK_THROWS(runner_kind_from_string("bogus"));
  CHECK(assumed_runner(ChaserKind::Smart) == RunnerKind::Naive);
  CHECK(assumed_runner(ChaserKind::Smartest) == RunnerKind::Smarter);
}

TEST_CASE("naive_chaser_query: weight 1, deterministic, feasible") {
  WorldMap map = small_map();
  PlanningConfig cfg = small_cfg(map, 8);
  RandomStream a(3), b(3);
  WeightedTrajectory wa =
      naive_chaser_query(map, map.chaser_start(), 2, cfg, a);
  WeightedTrajectory wb =
      naive_chaser_query(map, map.chaser_start(), 2, cfg, b);
  CHECK(wa.weight == 1.0);
  CHECK(wa.diag.goal_name == wb.diag.goal_name);
  REQUIRE(wa.trajectory.positions.size() == wb.trajectory.positions.size());
  for (std::size_t i = 0; i < wa.trajectory.positions.size(); ++i)
    CHECK(wa.trajectory.positions[i] == wb.trajectory.positions[i]);
  CHECK(wa.trajectory.t_first == 2);
  CHECK(wa.trajectory.t_last() == 8);
  // first step bounded by one move from the previous position
  CHECK(distance(map.chaser_start(), wa.trajectory.at(2)) <=
        cfg.rrt.speed + 1e-9);
}

TEST_CASE("naive_chaser_query: goal draw uniform over waypoints (chi-square)") {
  WorldMap map = ten_waypoint_map();
  PlanningConfig cfg = small_cfg(map, 6);
  cfg.rrt.max_iterations = 2000;
  const int n = 10000;
  std::map<std::string, int> counts;
  for (int i = 0; i < n; ++i) {
    RandomStream rng = derive_stream(400, "goal-uniformity", i);
    counts[naive_chaser_query(map, map.chaser_start(), 2, cfg, rng)
               .diag.goal_name]++;
  }
  REQUIRE(counts.size() == 10);
  double expected = n / 10.0;
  double chi2 = 0.0;
  for (const auto& [name, c] : counts)
    chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 21.666);  // df = 9, alpha = 0.01
}

TEST_CASE("runner_query: naive kind has weight exactly 1") {
  WorldMap map = small_map();
  PlanningConfig cfg = small_cfg(map, 8);
  Trajectory past = hold_trajectory(map.chaser_start(), 1, 2);
  RandomStream rng(9);
  WeightedTrajectory w = runner_query(map, past, 3, cfg, rng,
                                      RunnerKind::Naive);
  CHECK(w.weight == 1.0);
  CHECK(w.trajectory.t_first == 3);
  CHECK(w.trajectory.t_last() == 8);
  CHECK(w.diag.full_path.t_first == 1);
  CHECK(w.diag.full_path.t_last() == 8);
}

TEST_CASE("runner_query: alpha = 0 gives weight exactly 1 for smarter kind") {
  WorldMap map = small_map();
  PlanningConfig cfg = small_cfg(map, 8);
  cfg.alpha = 0.0;
  Trajectory past = hold_trajectory(map.chaser_start(), 1, 2);
  for (int i = 0; i < 20; ++i) {
    RandomStream rng = derive_stream(14, "rq-alpha0", i);
    WeightedTrajectory w = runner_query(map, past, 3, cfg, rng,
                                        RunnerKind::Smarter);
    CHECK(w.weight == 1.0);
  }
}

TEST_CASE("runner weight formula: T_visible = 3, alpha = 0.5 -> exp(-1.5)") {
  // Construct the weight directly from a diag with known visibility by
  // running on a map where visibility is easy to force: observer and runner
  // co-located is always visible.
  WorldMap map = small_map();
  PlanningConfig cfg = small_cfg(map, 8);
  cfg.alpha = 0.5;
  cfg.runner_evasion_samples = 1;  // single-sample form of the weight
  // weight = exp(-alpha * steps_visible); verify against diag bookkeeping
  Trajectory past = hold_trajectory(map.chaser_start(), 1, 2);
  bool saw_visible = false;
  for (int i = 0; i < 50; ++i) {
    RandomStream rng = derive_stream(21, "rq-formula", i);
    WeightedTrajectory w = runner_query(map, past, 3, cfg, rng,
                                        RunnerKind::Smarter);
    CHECK(w.weight ==
          doctest::Approx(std::exp(-cfg.alpha * w.diag.steps_visible)));
    if (w.diag.steps_visible > 0) saw_visible = true;
  }
  CHECK(saw_visible);  // the small map forces some visibility
  // the worked constant from the formula itself
  CHECK(std::exp(-0.5 * 3) == doctest::Approx(0.22313).epsilon(1e-4));
}

TEST_CASE("runner_query: visibility matches a time_visible oracle") {
  WorldMap map = small_map();
  PlanningConfig cfg = small_cfg(map, 8);
  cfg.runner_evasion_samples = 1;  // single-sample form of the weight
  Trajectory past = hold_trajectory(map.chaser_start(), 1, 2);
  for (int i = 0; i < 25; ++i) {
    RandomStream rng = derive_stream(33, "rq-oracle", i);
    WeightedTrajectory w = runner_query(map, past, 3, cfg, rng,
                                        RunnerKind::Smarter);
    if (w.diag.used_fallback) continue;
    // reconstruct the imagined observer: chaser past 1..2 + imagined future
    REQUIRE(w.diag.full_path.covers(1, 8));
    // The imagined chaser future is not exposed directly, but the count
    // must at least include the steps where the runner crosses the chaser's
    // *past* (t = 1, 2), since those are fixed.
    int past_vis = 0;
    for (int t = 1; t <= 2; ++t) {
      if (is_visible(map, past.at(t), w.diag.full_path.at(t),
                     w.diag.full_path.at(t), cfg.isovist))
        ++past_vis;
    }
    CHECK(w.diag.steps_visible >= past_vis);
    CHECK(w.diag.steps_visible <= 8);
    CHECK(w.weight == doctest::Approx(std::exp(-cfg.alpha *
                                               w.diag.steps_visible)));
  }
}

TEST_CASE("chaser_weight_for_future: alpha = 0 -> exactly 1 for any L") {
  WorldMap map = small_map();
  for (int L : {1, 4, 16}) {
    PlanningConfig cfg = small_cfg(map, 8);
    cfg.alpha = 0.0;
    cfg.L = L;
    Trajectory past = hold_trajectory(map.chaser_start(), 1, 2);
    Trajectory future = hold_trajectory(map.chaser_start(), 3, 8);
    RandomStream rng = derive_stream(47, "cw-alpha0", L);
    double w = chaser_weight_for_future(map, past, future, 3, cfg, rng,
                                        RunnerKind::Naive, nullptr);
    CHECK(w == 1.0);
  }
}

TEST_CASE("chaser weight algebra: L = 1, Tc = 2, Tr = 1, alpha = 1 -> e") {
  // With one imagined runner the weight is exp(alpha*Tc) * exp(-alpha*Tr);
  // for Tc = 2, Tr = 1 this is e. Verified against the grid bookkeeping on
  // a real query below and by direct evaluation here.
  double w = std::exp(1.0 * 2) * std::exp(-1.0 * 1);
  CHECK(w == doctest::Approx(2.71828).epsilon(1e-5));

  WorldMap map = small_map();
  PlanningConfig cfg = small_cfg(map, 8);
  cfg.L = 1;
  Trajectory past = hold_trajectory(map.chaser_start(), 1, 2);
  Trajectory future = hold_trajectory(map.chaser_start(), 3, 8);
  QueryDiagnostics diag;
  RandomStream rng = derive_stream(52, "cw-L1");
  double got = chaser_weight_for_future(map, past, future, 3, cfg, rng,
                                        RunnerKind::Smarter, &diag);
  REQUIRE(diag.chaser_factor.size() == 1);
  REQUIRE(diag.runner_weights.size() == 1);
  CHECK(got == doctest::Approx(diag.chaser_factor[0] * diag.runner_weights[0]));
  CHECK(diag.chaser_factor[0] ==
        doctest::Approx(std::exp(cfg.alpha * diag.chaser_vis_counts[0])));
}

TEST_CASE("chaser_weight_for_future equals mean of per-l products") {
  WorldMap map = small_map();
  PlanningConfig cfg = small_cfg(map, 8);
  cfg.L = 6;
  Trajectory past = hold_trajectory(map.chaser_start(), 1, 2);
  Trajectory future = hold_trajectory({5, 5}, 3, 8);
  QueryDiagnostics diag;
  RandomStream rng = derive_stream(53, "cw-mean");
  double got = chaser_weight_for_future(map, past, future, 3, cfg, rng,
                                        RunnerKind::Naive, &diag);
  REQUIRE(diag.chaser_factor.size() == 6);
  double mean = 0.0;
  for (int l = 0; l < 6; ++l)
    mean += diag.chaser_factor[l] * diag.runner_weights[l];
  mean /= 6.0;
  CHECK(got == doctest::Approx(mean));
}

TEST_CASE("chaser_query: extends the past by exactly one bounded step") {
  WorldMap map = small_map();
  PlanningConfig cfg = small_cfg(map, 8);
  cfg.L = 2;
  Trajectory past = hold_trajectory(map.chaser_start(), 1, 2);
  RandomStream rng = derive_stream(61, "cq-step");
  WeightedTrajectory w = chaser_query(map, past, 3, cfg, rng,
                                      RunnerKind::Naive);
  CHECK(w.trajectory.t_first == 1);
  CHECK(w.trajectory.t_last() == 3);
  CHECK(w.trajectory.at(1) == past.at(1));
  CHECK(w.trajectory.at(2) == past.at(2));
  CHECK(distance(past.at(2), w.trajectory.at(3)) <= cfg.rrt.speed + 1e-9);
  CHECK(w.weight > 0.0);
  // diagnostics keep the full candidate future
  CHECK(w.diag.full_path.t_first == 3);
  CHECK(w.diag.full_path.t_last() == 8);
}

TEST_CASE("pinned draws condition the queries") {
  WorldMap map = ten_waypoint_map();
  PlanningConfig cfg = small_cfg(map, 10);
  cfg.rrt.max_iterations = 20000;
  cfg.pin_chaser_goal = "e";
  RandomStream rng = derive_stream(71, "pin");
  WeightedTrajectory w =
      naive_chaser_query(map, map.chaser_start(), 2, cfg, rng);
  CHECK(w.diag.goal_name == "e");

  cfg.pin_runner_start = "a";
  cfg.pin_runner_goal = "c";
  Trajectory past = hold_trajectory(map.chaser_start(), 1, 1);
  WeightedTrajectory r = runner_query(map, past, 2, cfg, rng,
                                      RunnerKind::Naive);
  CHECK(r.diag.start_name == "a");
  CHECK(r.diag.goal_name == "c");
  CHECK(r.diag.full_path.at(1) == map.find_waypoint("a")->pos);

  cfg.pin_runner_goal = "zzz";
  CHECK_THROWS(runner_query(map, past, 2, cfg, rng, RunnerKind::Naive));
}

TEST_CASE("variance of the chaser weight shrinks roughly as 1/L") {
  WorldMap map = small_map();
  Trajectory past = hold_trajectory(map.chaser_start(), 1, 2);
  Trajectory future = hold_trajectory({5, 5}, 3, 8);
  const int reps = 120;
  std::map<int, double> var;
  for (int L : {4, 16, 64, 256}) {
    PlanningConfig cfg = small_cfg(map, 8);
    cfg.L = L;
    double sum = 0, sum2 = 0;
    for (int r = 0; r < reps; ++r) {
      RandomStream rng = derive_stream(81, "cw-var", L, r);
      double w = chaser_weight_for_future(map, past, future, 3, cfg, rng,
                                          RunnerKind::Smarter, nullptr);
      sum += w;
      sum2 += w * w;
    }
    var[L] = (sum2 - sum * sum / reps) / (reps - 1);
  }
  // each 4x increase in L should cut the variance roughly 4x; allow a
  // generous factor-2 slack per stage
  CHECK(var[16] <= var[4] / 2.0);
  CHECK(var[64] <= var[16] / 2.0);
  CHECK(var[256] <= var[64] / 2.0);
}

TEST_CASE("plan_future fallback holds in place") {
  // goal unreachable: sealed box around it
  std::vector<Polygon> obs;
  obs.push_back(Polygon({{8, 8}, {12, 8}, {12, 12}, {8, 12}}));
  WorldMap map({0, 0}, {20, 20}, std::move(obs),
               {{"a", {1, 1}}, {"b", {19, 19}}}, {1, 1});
  PlanningConfig cfg = small_cfg(map, 6);
  cfg.rrt.max_iterations = 100;
  cfg.rrt.goal_tolerance = 0.1;
  RandomStream rng(91);
  bool fell_back = false;
  Trajectory tr = plan_future(map, {1, 1}, {10, 10}, cfg, rng, 2, 6,
                              &fell_back);
  CHECK(fell_back);
  for (int t = 2; t <= 6; ++t) CHECK(tr.at(t) == Point2{1, 1});
}
