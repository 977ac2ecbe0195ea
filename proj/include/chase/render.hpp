#pragma once

#include <string>
#include <vector>

#include "chase/isovist.hpp"
#include "chase/rrt.hpp"
#include "chase/world_map.hpp"

namespace chase {

struct TrajectoryLayer {
  Trajectory trajectory;
  std::string color = "#1f77b4";
};

struct HeatmapLayer {
  std::vector<Trajectory> trajectories;
  int resolution = 40;  // grid cells per axis
  std::string color = "#d62728";
};

struct IsovistLayer {
  IsovistPolygon polygon;
  std::string color = "#ffbf00";
};

// Ordered layer stack over the base map. Rendering is a pure function of
// this spec; no randomness.
struct RenderSpec {
  bool draw_waypoints = true;
  std::vector<HeatmapLayer> heatmaps;
  std::vector<IsovistLayer> isovists;
  std::vector<TrajectoryLayer> trajectories;
  int canvas_px = 800;  // longer axis
};

std::string render_svg(const WorldMap& map, const RenderSpec& spec);

}  // namespace chase
