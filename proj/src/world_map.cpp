#include "chase/world_map.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace chase {

namespace {

Point2 parse_point(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw MapError("expected [x, y] for " + what);
  Point2 p{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(p.x) || !std::isfinite(p.y))
    throw MapError("non-finite coordinate in " + what);
  return p;
}

}  // namespace

WorldMap::WorldMap(Point2 bounds_min, Point2 bounds_max,
                   std::vector<Polygon> obstacles,
                   std::vector<Waypoint> waypoints, Point2 chaser_start)
    : bounds_min_(bounds_min),
      bounds_max_(bounds_max),
      obstacles_(std::move(obstacles)),
      waypoints_(std::move(waypoints)),
      chaser_start_(chaser_start) {
  validate();
}

void WorldMap::validate() const {
  if (bounds_min_.x >= bounds_max_.x || bounds_min_.y >= bounds_max_.y)
    throw MapError("bounds min must be strictly below bounds max");
  if (waypoints_.size() < 2)
    throw MapError("map needs at least 2 waypoints, got " +
                   std::to_string(waypoints_.size()));
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    for (const Point2& v : obstacles_[i].vertices()) {
      if (!in_bounds(v))
        throw MapError("obstacle " + std::to_string(i) +
                       " has a vertex outside bounds");
    }
  }
  std::set<std::string> seen;
  for (const Waypoint& w : waypoints_) {
    if (w.name.empty()) throw MapError("waypoint with empty name");
    if (!seen.insert(w.name).second)
      throw MapError("duplicate waypoint name '" + w.name + "'");
    if (!in_bounds(w.pos))
      throw MapError("waypoint '" + w.name + "' lies outside bounds");
    for (std::size_t i = 0; i < obstacles_.size(); ++i) {
      if (point_strictly_inside(w.pos, obstacles_[i]))
        throw MapError("waypoint '" + w.name + "' lies inside obstacle " +
                       std::to_string(i));
    }
  }
  if (!in_bounds(chaser_start_))
    throw MapError("chaser_start lies outside bounds");
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    if (point_strictly_inside(chaser_start_, obstacles_[i]))
      throw MapError("chaser_start lies inside obstacle " +
                     std::to_string(i));
  }
}

bool WorldMap::is_free(const Point2& p) const {
  if (!in_bounds(p)) return false;
  for (const Polygon& poly : obstacles_) {
    if (point_strictly_inside(p, poly)) return false;
  }
  return true;
}

const Waypoint* WorldMap::find_waypoint(const std::string& name) const {
  for (const Waypoint& w : waypoints_) {
    if (w.name == name) return &w;
  }
  return nullptr;
}

WorldMap WorldMap::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw MapError("map document must be a JSON object");
  if (!doc.contains("bounds") || !doc["bounds"].contains("min") ||
      !doc["bounds"].contains("max"))
    throw MapError("map document missing bounds.min/bounds.max");
  const Point2 bmin = parse_point(doc["bounds"]["min"], "bounds.min");
  const Point2 bmax = parse_point(doc["bounds"]["max"], "bounds.max");

  std::vector<Polygon> obstacles;
  for (const auto& poly_json : doc.value("obstacles", nlohmann::json::array())) {
    std::vector<Point2> verts;
    for (const auto& v : poly_json)
      verts.push_back(parse_point(
          v, "obstacle " + std::to_string(obstacles.size()) + " vertex"));
    try {
      obstacles.emplace_back(std::move(verts));
    } catch (const std::invalid_argument& e) {
      throw MapError("obstacle " + std::to_string(obstacles.size()) + ": " +
                     e.what());
    }
  }

  std::vector<Waypoint> waypoints;
  for (const auto& w : doc.value("waypoints", nlohmann::json::array())) {
    if (!w.contains("name") || !w.contains("pos"))
      throw MapError("waypoint entries need 'name' and 'pos'");
    waypoints.push_back({w["name"].get<std::string>(),
                         parse_point(w["pos"], "waypoint pos")});
  }

  if (!doc.contains("chaser_start"))
    throw MapError("map document missing chaser_start");
  const Point2 start = parse_point(doc["chaser_start"], "chaser_start");

  return WorldMap(bmin, bmax, std::move(obstacles), std::move(waypoints),
                  start);
}

WorldMap WorldMap::load(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw MapError(std::string("map parse error: ") + e.what());
  }
  return from_json(doc);
}

WorldMap WorldMap::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MapError("cannot open map file: " + path);
  return load(in);
}

nlohmann::json WorldMap::to_json() const {
  nlohmann::json doc;
  doc["bounds"] = {{"min", {bounds_min_.x, bounds_min_.y}},
                   {"max", {bounds_max_.x, bounds_max_.y}}};
  doc["obstacles"] = nlohmann::json::array();
  for (const Polygon& poly : obstacles_) {
    nlohmann::json verts = nlohmann::json::array();
    for (const Point2& v : poly.vertices()) verts.push_back({v.x, v.y});
    doc["obstacles"].push_back(verts);
  }
  doc["waypoints"] = nlohmann::json::array();
  for (const Waypoint& w : waypoints_) {
    doc["waypoints"].push_back({{"name", w.name}, {"pos", {w.pos.x, w.pos.y}}});
  }
  doc["chaser_start"] = {chaser_start_.x, chaser_start_.y};
  return doc;
}

}  // namespace chase
