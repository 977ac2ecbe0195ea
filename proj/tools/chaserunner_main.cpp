// Command-line driver: episode simulation, detection-rate and sample-budget
// experiments, SVG rendering, and planner/isovist debug dumps.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chase/experiments.hpp"
#include "chase/io.hpp"
#include "chase/render.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalArgs {
  std::string map_path;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int threads = 1;
  std::vector<std::string> sets;
};

// Applies "a.b.c=value" overrides onto the config document. The value is
// parsed as JSON when possible, else taken as a string.
void apply_set(json& doc, const std::string& expr) {
  const auto eq = expr.find('=');
  if (eq == std::string::npos)
    throw std::runtime_error("--set expects key=value, got: " + expr);
  const std::string key = expr.substr(0, eq);
  const std::string val = expr.substr(eq + 1);
  json* node = &doc;
  std::istringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
  try {
    (*node)[parts.back()] = json::parse(val);
  } catch (const json::parse_error&) {
    (*node)[parts.back()] = val;
  }
}

json load_config(const GlobalArgs& g) {
  json doc = json::object();
  if (!g.config_path.empty()) {
    if (!fs::exists(g.config_path))
      throw std::runtime_error("config file not found: " + g.config_path);
    doc = json::parse(chase::read_file(g.config_path));
  }
  for (const std::string& s : g.sets) apply_set(doc, s);
  return doc;
}

chase::WorldMap load_map_checked(const GlobalArgs& g) {
  if (g.map_path.empty()) throw std::runtime_error("--map is required");
  if (!fs::exists(g.map_path))
    throw std::runtime_error("map file not found: " + g.map_path);
  return chase::WorldMap::load_file(g.map_path);
}

chase::PlanningConfig planning_from_json(const chase::WorldMap& map,
                                         const json& cfg) {
  const json p = cfg.value("planning", json::object());
  const int horizon = p.value("horizon_T", 20);
  chase::PlanningConfig out = chase::PlanningConfig::defaults_for(map, horizon);
  out.alpha = p.value("alpha", out.alpha);
  out.K = p.value("K", out.K);
  out.L = p.value("L", out.L);
  out.runner_speed_factor =
      p.value("runner_speed_factor", out.runner_speed_factor);
  out.runner_evasion_samples =
      p.value("runner_evasion_samples", out.runner_evasion_samples);
  if (p.contains("isovist")) {
    const json& iso = p["isovist"];
    if (iso.contains("fov_half_angle_deg"))
      out.isovist.fov_half_angle =
          iso["fov_half_angle_deg"].get<double>() * chase::kPi / 180.0;
    out.isovist.sight_range = iso.value("sight_range", out.isovist.sight_range);
    out.isovist.ray_count = iso.value("ray_count", out.isovist.ray_count);
  }
  if (p.contains("rrt")) {
    const json& r = p["rrt"];
    out.rrt.step_size = r.value("step_size", out.rrt.step_size);
    out.rrt.goal_bias = r.value("goal_bias", out.rrt.goal_bias);
    out.rrt.goal_tolerance = r.value("goal_tolerance", out.rrt.goal_tolerance);
    out.rrt.max_iterations = r.value("max_iterations", out.rrt.max_iterations);
    out.rrt.smoothing_iterations =
        r.value("smoothing_iterations", out.rrt.smoothing_iterations);
    out.rrt.speed = r.value("speed", out.rrt.speed);
  }
  if (p.contains("pin_runner_start"))
    out.pin_runner_start = p["pin_runner_start"].get<std::string>();
  if (p.contains("pin_runner_goal"))
    out.pin_runner_goal = p["pin_runner_goal"].get<std::string>();
  if (p.contains("pin_chaser_goal"))
    out.pin_chaser_goal = p["pin_chaser_goal"].get<std::string>();
  return out;
}

chase::ScenarioConfig scenario_from_json(const chase::WorldMap& map,
                                         const json& cfg,
                                         const GlobalArgs& g) {
  chase::ScenarioConfig sc;
  sc.planning = planning_from_json(map, cfg);
  sc.base_seed = g.seed;
  sc.threads = g.threads;
  sc.map_id = fs::path(g.map_path).stem().string();
  const json s = cfg.value("scenario", json::object());
  sc.variant.chaser_kind =
      chase::chaser_kind_from_string(s.value("chaser", "smart"));
  sc.variant.runner_kind =
      chase::runner_kind_from_string(s.value("runner", "naive"));
  sc.restarts = s.value("restarts", sc.restarts);
  sc.fov360_override = s.value("fov360", false);
  sc.argmax_execution = s.value("argmax", false);
  if (s.value("resample", "multinomial") == "systematic")
    sc.scheme = chase::ResampleScheme::Systematic;
  if (s.contains("true_runner_start"))
    sc.true_runner_start = s["true_runner_start"].get<std::string>();
  if (s.contains("true_runner_goal"))
    sc.true_runner_goal = s["true_runner_goal"].get<std::string>();
  return sc;
}

void write_manifest(const GlobalArgs& g, const std::string& command,
                    const json& config,
                    const std::vector<std::string>& outputs) {
  const std::string map_bytes = chase::read_file(g.map_path);
  const json manifest = chase::make_manifest(
      command, fs::path(g.map_path).stem().string(),
      chase::content_hash_hex(map_bytes), g.seed, g.threads, config, outputs);
  chase::write_file((fs::path(g.out_dir) / "manifest.json").string(),
                    manifest.dump(2) + "\n");
}

chase::Point2 parse_xy(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw std::runtime_error("expected x,y: " + s);
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

int cmd_simulate(const GlobalArgs& g, bool frames) {
  const chase::WorldMap map = load_map_checked(g);
  const json cfg = load_config(g);
  const chase::ScenarioConfig sc = scenario_from_json(map, cfg, g);
  fs::create_directories(g.out_dir);
  write_manifest(g, "simulate", cfg, {"episode.ndjson"});

  const chase::EpisodeRecord rec = chase::run_episode(map, sc, g.seed);
  chase::write_file((fs::path(g.out_dir) / "episode.ndjson").string(),
                    chase::episode_to_json(rec).dump() + "\n");
  if (frames) {
    for (int t = rec.chaser_executed.t_first; t <= rec.chaser_executed.t_last();
         ++t) {
      chase::RenderSpec spec;
      spec.trajectories.push_back(
          {rec.chaser_executed.slice(1, t), "#1f77b4"});
      spec.trajectories.push_back(
          {rec.runner_executed.slice(1, t), "#d62728"});
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%03d.svg", t);
      chase::write_file((fs::path(g.out_dir) / name).string(),
                        chase::render_svg(map, spec));
    }
  }
  std::printf("episode: detected=%s%s\n", rec.detected ? "true" : "false",
              rec.detection_time
                  ? (" at t=" + std::to_string(*rec.detection_time)).c_str()
                  : "");
  return 0;
}

int cmd_experiment_detect(const GlobalArgs& g, int restarts,
                          const std::string& kl) {
  const chase::WorldMap map = load_map_checked(g);
  json cfg = load_config(g);
  if (!kl.empty()) {
    const auto x = kl.find('x');
    if (x == std::string::npos)
      throw std::runtime_error("--kl expects KxL, got: " + kl);
    cfg["planning"]["K"] = std::stoi(kl.substr(0, x));
    cfg["planning"]["L"] = std::stoi(kl.substr(x + 1));
  }
  chase::ScenarioConfig sc = scenario_from_json(map, cfg, g);
  if (restarts > 0) sc.restarts = restarts;
  fs::create_directories(g.out_dir);
  write_manifest(g, "experiment detect", cfg,
                 {"detection_table.csv", "episodes.ndjson"});

  std::vector<chase::EpisodeRecord> records;
  const chase::DetectionTable table =
      chase::detection_experiment(map, sc, &records);
  chase::write_file((fs::path(g.out_dir) / "detection_table.csv").string(),
                    chase::detection_table_csv(table));
  std::ostringstream nd;
  for (const auto& rec : records) nd << chase::episode_to_json(rec).dump() << '\n';
  chase::write_file((fs::path(g.out_dir) / "episodes.ndjson").string(),
                    nd.str());
  std::printf("%s", chase::detection_table_csv(table).c_str());
  return 0;
}

int cmd_experiment_budget(const GlobalArgs& g, int budget,
                          const std::string& pairs_arg, int restarts,
                          int horizon) {
  const chase::WorldMap map = load_map_checked(g);
  const json cfg = load_config(g);
  chase::ScenarioConfig sc = scenario_from_json(map, cfg, g);

  chase::BudgetRunConfig bc;
  bc.total_budget = budget;
  bc.restarts = restarts;
  bc.horizon = horizon;
  if (pairs_arg.empty()) {
    bc.pairs = chase::BudgetRunConfig::default_pairs();
  } else {
    std::istringstream ss(pairs_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto x = tok.find('x');
      if (x == std::string::npos)
        throw std::runtime_error("--pairs expects KxL list, got: " + tok);
      bc.pairs.emplace_back(std::stoi(tok.substr(0, x)),
                            std::stoi(tok.substr(x + 1)));
    }
  }
  fs::create_directories(g.out_dir);
  write_manifest(g, "experiment budget", cfg,
                 {"budget_stats.csv", "budget_raw.ndjson"});

  const chase::BudgetResult result = chase::budget_experiment(map, bc, sc);
  chase::write_file((fs::path(g.out_dir) / "budget_stats.csv").string(),
                    chase::budget_stats_csv(result));
  chase::write_file((fs::path(g.out_dir) / "budget_raw.ndjson").string(),
                    chase::budget_raw_ndjson(result));
  std::printf("budget experiment: %zu pairs x %d restarts written\n",
              result.cells.size(), bc.restarts);
  return 0;
}

int cmd_render(const GlobalArgs& g, const std::string& episode_path,
               int episode_index, bool heatmap, int isovist_t,
               const std::string& out_name) {
  const chase::WorldMap map = load_map_checked(g);
  chase::RenderSpec spec;
  if (!episode_path.empty()) {
    if (!fs::exists(episode_path))
      throw std::runtime_error("episode file not found: " + episode_path);
    std::istringstream in(chase::read_file(episode_path));
    std::string line;
    std::vector<json> lines;
    while (std::getline(in, line)) {
      if (!line.empty()) lines.push_back(json::parse(line));
    }
    if (episode_index < 0 || episode_index >= static_cast<int>(lines.size()))
      throw std::runtime_error("episode index out of range: " +
                               std::to_string(episode_index));
    if (heatmap) {
      chase::HeatmapLayer layer;
      for (const json& l : lines)
        layer.trajectories.push_back(
            chase::trajectory_from_json(l["chaser_executed"]));
      spec.heatmaps.push_back(std::move(layer));
    }
    const json& ep = lines[static_cast<std::size_t>(episode_index)];
    const chase::Trajectory chaser =
        chase::trajectory_from_json(ep["chaser_executed"]);
    const chase::Trajectory runner =
        chase::trajectory_from_json(ep["runner_executed"]);
    spec.trajectories.push_back({chaser, "#1f77b4"});
    spec.trajectories.push_back({runner, "#d62728"});
    if (isovist_t > 0) {
      if (!chaser.covers(isovist_t, isovist_t) ||
          !runner.covers(isovist_t, isovist_t))
        throw std::runtime_error("isovist time index outside the episode");
      const json cfg = load_config(g);
      const chase::PlanningConfig pc = planning_from_json(map, cfg);
      spec.isovists.push_back(
          {chase::isovist(map, chaser.at(isovist_t), runner.at(isovist_t),
                          pc.isovist),
           "#ffbf00"});
    }
  }
  fs::create_directories(g.out_dir);
  const std::string path = (fs::path(g.out_dir) / out_name).string();
  chase::write_file(path, chase::render_svg(map, spec));
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_plan(const GlobalArgs& g, const std::string& from,
             const std::string& to) {
  const chase::WorldMap map = load_map_checked(g);
  const json cfg = load_config(g);
  const chase::PlanningConfig pc = planning_from_json(map, cfg);
  const chase::Waypoint* a = map.find_waypoint(from);
  const chase::Waypoint* b = map.find_waypoint(to);
  if (!a) throw std::runtime_error("unknown waypoint: " + from);
  if (!b) throw std::runtime_error("unknown waypoint: " + to);
  chase::RandomStream rng = chase::derive_stream(g.seed, "plan-cli");
  chase::PlannedPath path = chase::rrt_plan(map, a->pos, b->pos, pc.rrt, rng);
  path = chase::shortcut_smooth(path, map, pc.rrt, rng);
  json out;
  out["waypoints"] = json::array();
  for (const chase::Point2& p : path.waypoints)
    out["waypoints"].push_back({p.x, p.y});
  out["length"] = path.length();
  std::printf("%s\n", out.dump().c_str());
  return 0;
}

int cmd_isovist(const GlobalArgs& g, const std::string& at,
                const std::string& aim) {
  const chase::WorldMap map = load_map_checked(g);
  const json cfg = load_config(g);
  const chase::PlanningConfig pc = planning_from_json(map, cfg);
  const chase::IsovistPolygon poly =
      chase::isovist(map, parse_xy(at), parse_xy(aim), pc.isovist);
  json out;
  out["apex"] = {poly.apex.x, poly.apex.y};
  out["boundary"] = json::array();
  for (const chase::Point2& p : poly.boundary.vertices())
    out["boundary"].push_back({p.x, p.y});
  out["area"] = poly.boundary.signed_area();
  std::printf("%s\n", out.dump().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pursuit-evasion planning-as-inference simulator"};
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--map", g.map_path, "map JSON file");
  app.add_option("--config", g.config_path, "config JSON file");
  app.add_option("--seed", g.seed, "base seed");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--threads", g.threads, "worker threads (speed only)");
  app.add_option("--set", g.sets, "config override key=value (dotted keys)");

  auto* sim = app.add_subcommand("simulate", "run one episode");
  bool frames = false;
  sim->add_flag("--frames", frames, "write per-step SVG frames");

  auto* exp = app.add_subcommand("experiment", "batch experiments");
  exp->require_subcommand(1);
  auto* detect = exp->add_subcommand("detect", "detection-rate table");
  int restarts = 0;
  std::string kl;
  detect->add_option("--restarts", restarts, "episodes per variant");
  detect->add_option("--kl", kl, "sample budget as KxL");
  auto* budget = exp->add_subcommand("budget", "sample-budget study");
  int budget_total = 2048, budget_restarts = 10, budget_T = 28;
  std::string pairs;
  budget->add_option("--budget", budget_total, "total K*L budget");
  budget->add_option("--pairs", pairs, "comma-separated KxL pairs");
  budget->add_option("--restarts", budget_restarts, "episode restarts");
  budget->add_option("-T,--horizon", budget_T, "episode horizon");

  auto* render = app.add_subcommand("render", "render map/episodes to SVG");
  std::string episode_path, render_out = "render.svg";
  int episode_index = 0, isovist_t = 0;
  bool heatmap = false;
  render->add_option("--episode", episode_path, "episode NDJSON file");
  render->add_option("--index", episode_index, "episode line index");
  render->add_flag("--heatmap", heatmap, "chaser-trajectory heat map");
  render->add_option("--isovist-t", isovist_t, "draw isovist at time step");
  render->add_option("--svg", render_out, "output SVG name");

  auto* plan = app.add_subcommand("plan", "debug: RRT path between waypoints");
  std::string from, to;
  plan->add_option("--from", from, "start waypoint name")->required();
  plan->add_option("--to", to, "goal waypoint name")->required();

  auto* iso = app.add_subcommand("isovist", "debug: isovist polygon");
  std::string at, aim;
  iso->add_option("--at", at, "apex as x,y")->required();
  iso->add_option("--aim", aim, "aim point as x,y")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(g, frames);
    if (detect->parsed()) return cmd_experiment_detect(g, restarts, kl);
    if (budget->parsed())
      return cmd_experiment_budget(g, budget_total, pairs, budget_restarts,
                                   budget_T);
    if (render->parsed())
      return cmd_render(g, episode_path, episode_index, heatmap, isovist_t,
                        render_out);
    if (plan->parsed()) return cmd_plan(g, from, to);
    if (iso->parsed()) return cmd_isovist(g, at, aim);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
