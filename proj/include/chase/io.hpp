#pragma once

#include <string>

#include <json.hpp>

#include "chase/experiments.hpp"

namespace chase {

// All floating point text output goes through this (CSV determinism).
std::string format_double(double v);

nlohmann::json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const nlohmann::json& j);

nlohmann::json step_stats_to_json(const StepStats& s);
nlohmann::json episode_to_json(const EpisodeRecord& rec);

// CSV schemas (versioned in the manifest):
//   detection_table.csv: chaser_kind,runner_kind,restarts,detections,rate
//   budget_stats.csv: K,L,restart,t,log_z_chaser,log_z_runner,ess,
//                     ess_fraction,w_min,w_q25,w_median,w_q75,w_max
std::string detection_table_csv(const DetectionTable& table);
std::string budget_stats_csv(const BudgetResult& result);

// NDJSON lines with the raw per-step weight grids of a budget run.
std::string budget_raw_ndjson(const BudgetResult& result);

// FNV-1a content hash, hex-encoded; used to fingerprint the map file.
std::string content_hash_hex(const std::string& bytes);

nlohmann::json make_manifest(const std::string& command,
                             const std::string& map_id,
                             const std::string& map_hash, std::uint64_t seed,
                             int threads, const nlohmann::json& config,
                             const std::vector<std::string>& outputs);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace chase
