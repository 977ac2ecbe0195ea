#include "chase/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace chase {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

struct Mapper {
  double scale;
  double min_x, max_y;
  double px(double x) const { return (x - min_x) * scale; }
  double py(double y) const { return (max_y - y) * scale; }  // y grows upward
};

void emit_polygon(std::ostringstream& out, const Mapper& m,
                  const std::string& cls,
                  const std::vector<Point2>& verts, const std::string& fill,
                  const std::string& stroke, double opacity) {
  out << "<polygon class=\"" << cls << "\" points=\"";
  for (const Point2& v : verts)
    out << fmt(m.px(v.x)) << ',' << fmt(m.py(v.y)) << ' ';
  out << "\" fill=\"" << fill << "\" stroke=\"" << stroke
      << "\" fill-opacity=\"" << fmt(opacity) << "\"/>\n";
}

}  // namespace

std::string render_svg(const WorldMap& map, const RenderSpec& spec) {
  const double w = map.bounds_max().x - map.bounds_min().x;
  const double h = map.bounds_max().y - map.bounds_min().y;
  const double scale = static_cast<double>(spec.canvas_px) / std::max(w, h);
  const Mapper m{scale, map.bounds_min().x, map.bounds_max().y};
  const double cw = w * scale;
  const double ch = h * scale;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << fmt(cw) << "\" height=\"" << fmt(ch) << "\">\n";
  out << "<rect class=\"bounds\" x=\"0\" y=\"0\" width=\"" << fmt(cw) << "\" height=\""
      << fmt(ch) << "\" fill=\"#ffffff\" stroke=\"#000000\"/>\n";

  for (const HeatmapLayer& layer : spec.heatmaps) {
    const int res = std::max(1, layer.resolution);
    std::vector<int> counts(static_cast<std::size_t>(res * res), 0);
    int max_count = 0;
    for (const Trajectory& traj : layer.trajectories) {
      for (const Point2& p : traj.positions) {
        const int cx = std::clamp(
            static_cast<int>((p.x - map.bounds_min().x) / w * res), 0, res - 1);
        const int cy = std::clamp(
            static_cast<int>((p.y - map.bounds_min().y) / h * res), 0, res - 1);
        max_count = std::max(max_count, ++counts[static_cast<std::size_t>(
                                            cy * res + cx)]);
      }
    }
    if (max_count == 0) continue;
    const double cell_w = cw / res;
    const double cell_h = ch / res;
    for (int cy = 0; cy < res; ++cy) {
      for (int cx = 0; cx < res; ++cx) {
        const int c = counts[static_cast<std::size_t>(cy * res + cx)];
        if (c == 0) continue;
        // intensity normalized by the max cell, so N copies of the same
        // trajectory render identically for any N
        const double op = 0.8 * static_cast<double>(c) / max_count;
        out << "<rect class=\"heatcell\" x=\"" << fmt(cell_w * cx) << "\" y=\""
            << fmt(ch - cell_h * (cy + 1)) << "\" width=\"" << fmt(cell_w)
            << "\" height=\"" << fmt(cell_h) << "\" fill=\"" << layer.color
            << "\" fill-opacity=\"" << fmt(op) << "\"/>\n";
      }
    }
  }

  for (const Polygon& poly : map.obstacles())
    emit_polygon(out, m, "obstacle", poly.vertices(), "#888888", "#444444", 1.0);

  for (const IsovistLayer& layer : spec.isovists)
    emit_polygon(out, m, "isovist", layer.polygon.boundary.vertices(), layer.color,
                 "none", 0.35);

  for (const TrajectoryLayer& layer : spec.trajectories) {
    out << "<polyline class=\"trajectory\" points=\"";
    for (const Point2& p : layer.trajectory.positions)
      out << fmt(m.px(p.x)) << ',' << fmt(m.py(p.y)) << ' ';
    out << "\" fill=\"none\" stroke=\"" << layer.color
        << "\" stroke-width=\"2\"/>\n";
  }

  if (spec.draw_waypoints) {
    for (const Waypoint& wp : map.waypoints()) {
      out << "<circle class=\"waypoint\" cx=\"" << fmt(m.px(wp.pos.x)) << "\" cy=\""
          << fmt(m.py(wp.pos.y)) << "\" r=\"4\" fill=\"#2ca02c\"/>\n";
      out << "<text x=\"" << fmt(m.px(wp.pos.x) + 6) << "\" y=\""
          << fmt(m.py(wp.pos.y) - 6) << "\" font-size=\"14\">" << wp.name
          << "</text>\n";
    }
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace chase
