// Deterministic standalone SVG output for debugging scenes: polygons, grid
// cells, geodesics, disks, split components. Byte-identical output for
// identical scenes; viewBox is the scene bbox padded by 5%.

#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "rectify.hpp"

namespace quadlab {

class SvgBuilder {
 public:
  void add_polygon(const SimplePolygon& poly, const std::string& stroke = "#222",
                   const std::string& fill = "none") {
    std::string d;
    const auto& v = poly.vertices();
    for (size_t i = 0; i < v.size(); ++i) {
      d += (i == 0 ? "M" : "L");
      d += num(v[i].x) + " " + num(v[i].y);
      expand(v[i]);
    }
    d += "Z";
    group() += "<path d=\"" + d + "\" fill=\"" + fill + "\" stroke=\"" + stroke +
               "\" stroke-width=\"0.35%\"/>\n";
  }

  void add_cells(const std::vector<Cell>& cells, double s, Point origin,
                 const std::string& fill = "#9ecae1") {
    std::string& g = group();
    for (const Cell& c : cells) {
      const Point lo{origin.x + c.x * s, origin.y + c.y * s};
      expand(lo);
      expand({lo.x + s, lo.y + s});
      g += "<rect x=\"" + num(lo.x) + "\" y=\"" + num(lo.y) + "\" width=\"" + num(s) +
           "\" height=\"" + num(s) + "\" fill=\"" + fill + "\" fill-opacity=\"0.5\"/>\n";
    }
  }

  void add_polyline(const Polyline& pl, const std::string& stroke = "#d62728") {
    if (pl.pts.empty()) return;
    std::string d;
    for (size_t i = 0; i < pl.pts.size(); ++i) {
      d += (i == 0 ? "M" : "L");
      d += num(pl.pts[i].x) + " " + num(pl.pts[i].y);
      expand(pl.pts[i]);
    }
    group() += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + stroke +
               "\" stroke-width=\"0.5%\"/>\n";
  }

  void add_circle(Point c, double r, const std::string& stroke = "#2ca02c",
                  const std::string& fill = "none") {
    expand({c.x - r, c.y - r});
    expand({c.x + r, c.y + r});
    group() += "<circle cx=\"" + num(c.x) + "\" cy=\"" + num(c.y) + "\" r=\"" + num(r) +
               "\" fill=\"" + fill + "\" fill-opacity=\"0.6\" stroke=\"" + stroke +
               "\" stroke-width=\"0.35%\"/>\n";
  }

  void new_layer(const std::string& id) { layers_.push_back({id, ""}); }

  int layer_count() const { return static_cast<int>(layers_.size()); }

  std::string str() const {
    const double pad = 0.05 * std::max(bbox_.width(), bbox_.height());
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
    out += num(bbox_.lo.x - pad) + " " + num(bbox_.lo.y - pad) + " " +
           num(bbox_.width() + 2 * pad) + " " + num(bbox_.height() + 2 * pad) + "\">\n";
    // Flip the y axis so the scene reads in mathematical orientation.
    out += "<g transform=\"translate(0 " + num(bbox_.lo.y + bbox_.hi.y) +
           ") scale(1 -1)\">\n";
    for (const auto& [id, body] : layers_) {
      out += "<g id=\"" + id + "\">\n" + body + "</g>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
  }

 private:
  static std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.8g", v);
    return buf;
  }
  void expand(Point p) { bbox_.expand(p); }
  std::string& group() {
    if (layers_.empty()) layers_.push_back({"layer0", ""});
    return layers_.back().second;
  }

  Box bbox_;
  std::vector<std::pair<std::string, std::string>> layers_;
};

}  // namespace quadlab
