#include "chase/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chase {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

nlohmann::json trajectory_to_json(const Trajectory& traj) {
  nlohmann::json j;
  j["t_first"] = traj.t_first;
  j["positions"] = nlohmann::json::array();
  for (const Point2& p : traj.positions) j["positions"].push_back({p.x, p.y});
  return j;
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
  Trajectory traj;
  traj.t_first = j.at("t_first").get<int>();
  for (const auto& p : j.at("positions"))
    traj.positions.push_back({p[0].get<double>(), p[1].get<double>()});
  return traj;
}

nlohmann::json step_stats_to_json(const StepStats& s) {
  return {{"t", s.t},
          {"log_z_chaser", s.log_z_chaser},
          {"log_z_runner", s.log_z_runner},
          {"ess", s.ess_chaser},
          {"ess_fraction", s.ess_fraction},
          {"w_quantiles", s.weight_quantiles}};
}

nlohmann::json episode_to_json(const EpisodeRecord& rec) {
  nlohmann::json j;
  j["chaser_executed"] = trajectory_to_json(rec.chaser_executed);
  j["runner_executed"] = trajectory_to_json(rec.runner_executed);
  j["detected"] = rec.detected;
  if (rec.detection_time)
    j["detection_time"] = *rec.detection_time;
  else
    j["detection_time"] = nullptr;
  j["runner_start"] = rec.runner_start_name;
  j["runner_goal"] = rec.runner_goal_name;
  j["per_step_stats"] = nlohmann::json::array();
  for (const StepStats& s : rec.per_step_stats)
    j["per_step_stats"].push_back(step_stats_to_json(s));
  j["beliefs"] = nlohmann::json::array();
  for (const BeliefSnapshot& snap : rec.beliefs) {
    nlohmann::json samples = nlohmann::json::array();
    for (const BeliefSample& s : snap.samples)
      samples.push_back({{"pos", {s.pos.x, s.pos.y}}, {"weight", s.weight}});
    j["beliefs"].push_back({{"t", snap.t}, {"samples", samples}});
  }
  return j;
}

std::string detection_table_csv(const DetectionTable& table) {
  std::ostringstream out;
  out << "chaser_kind,runner_kind,restarts,detections,rate\n";
  for (const DetectionCell& c : table.cells) {
    out << to_string(c.chaser_kind) << ',' << to_string(c.runner_kind) << ','
        << c.restarts << ',' << c.detections << ',' << format_double(c.rate)
        << '\n';
  }
  return out.str();
}

std::string budget_stats_csv(const BudgetResult& result) {
  std::ostringstream out;
  out << "K,L,restart,t,log_z_chaser,log_z_runner,ess,ess_fraction,"
         "w_min,w_q25,w_median,w_q75,w_max\n";
  for (const BudgetCell& cell : result.cells) {
    for (std::size_t r = 0; r < cell.per_restart.size(); ++r) {
      for (const StepStats& s : cell.per_restart[r]) {
        out << cell.K << ',' << cell.L << ',' << r << ',' << s.t << ','
            << format_double(s.log_z_chaser) << ','
            << format_double(s.log_z_runner) << ','
            << format_double(s.ess_chaser) << ','
            << format_double(s.ess_fraction);
        for (double q : s.weight_quantiles) out << ',' << format_double(q);
        out << '\n';
      }
    }
  }
  return out.str();
}

std::string budget_raw_ndjson(const BudgetResult& result) {
  std::ostringstream out;
  for (const BudgetCell& cell : result.cells) {
    for (std::size_t r = 0; r < cell.raw_grids.size(); ++r) {
      for (std::size_t i = 0; i < cell.raw_grids[r].size(); ++i) {
        const WeightGrid& g = cell.raw_grids[r][i];
        nlohmann::json line{{"K", cell.K},
                            {"L", cell.L},
                            {"restart", r},
                            {"t", cell.per_restart[r][i].t},
                            {"w_chaser", g.w_chaser},
                            {"w_runner", g.w_runner}};
        out << line.dump() << '\n';
      }
    }
  }
  return out.str();
}

std::string content_hash_hex(const std::string& bytes) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

nlohmann::json make_manifest(const std::string& command,
                             const std::string& map_id,
                             const std::string& map_hash, std::uint64_t seed,
                             int threads, const nlohmann::json& config,
                             const std::vector<std::string>& outputs) {
  return {{"artifact_version", "0.1.0"},
          {"command", command},
          {"map_id", map_id},
          {"map_hash", map_hash},
          {"seed", seed},
          {"threads", threads},
          {"config", config},
          {"outputs", outputs},
          {"csv_schema",
           {{"detection_table", 1}, {"budget_stats", 1}, {"episode_ndjson", 1}}}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace chase
