#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "chase/geometry.hpp"
#include "chase/rng.hpp"

namespace chase {

struct MapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Waypoint {
  std::string name;
  Point2 pos;
};

// Immutable polygonal city map with the named waypoint set used for
// start/goal sampling. Validated on load; shareable across workers.
class WorldMap {
 public:
  WorldMap(Point2 bounds_min, Point2 bounds_max, std::vector<Polygon> obstacles,
           std::vector<Waypoint> waypoints, Point2 chaser_start);

  static WorldMap from_json(const nlohmann::json& doc);
  static WorldMap load(std::istream& in);
  static WorldMap load_file(const std::string& path);
  nlohmann::json to_json() const;

  const Point2& bounds_min() const { return bounds_min_; }
  const Point2& bounds_max() const { return bounds_max_; }
  const std::vector<Polygon>& obstacles() const { return obstacles_; }
  const std::vector<Waypoint>& waypoints() const { return waypoints_; }
  const Point2& chaser_start() const { return chaser_start_; }

  double diagonal() const {
    return distance(bounds_min_, bounds_max_);
  }

  bool in_bounds(const Point2& p) const {
    return p.x >= bounds_min_.x && p.x <= bounds_max_.x &&
           p.y >= bounds_min_.y && p.y <= bounds_max_.y;
  }

  // Inside bounds and outside every obstacle interior.
  bool is_free(const Point2& p) const;

  const Waypoint& sample_waypoint(RandomStream& rng) const {
    return waypoints_[rng.uniform_index(waypoints_.size())];
  }

  const Waypoint* find_waypoint(const std::string& name) const;

 private:
  void validate() const;

  Point2 bounds_min_;
  Point2 bounds_max_;
  std::vector<Polygon> obstacles_;
  std::vector<Waypoint> waypoints_;
  Point2 chaser_start_;
};

}  // namespace chase
