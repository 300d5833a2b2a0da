// JSON formats used repo-wide.
//
// Marked quadrilateral:
//   {"vertices":[[x,y],...], "marks":[{"edge":i,"t":f}, ... 4 entries]}
// Geodesics serialize as {"length":f, "path":[[x,y],...]}.

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "geometry.hpp"

namespace quadlab {

using Json = nlohmann::ordered_json;

inline Json to_json(Point p) { return Json::array({p.x, p.y}); }

inline Json to_json(const MarkedQuadrilateral& q) {
  Json j;
  j["vertices"] = Json::array();
  for (const Point& p : q.polygon().vertices()) j["vertices"].push_back(to_json(p));
  j["marks"] = Json::array();
  for (const BoundaryLocation& m : q.marks())
    j["marks"].push_back(Json{{"edge", m.edge}, {"t", m.t}});
  return j;
}

inline Json to_json(const Polyline& pl) {
  Json j = Json::array();
  for (const Point& p : pl.pts) j.push_back(to_json(p));
  return j;
}

inline MarkedQuadrilateral quad_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("marks"))
    fail(Errc::parse_error, "expected object with \"vertices\" and \"marks\"");
  std::vector<Point> verts;
  for (const auto& v : j.at("vertices")) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      fail(Errc::parse_error, "vertex must be [x, y]");
    verts.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  const auto& marks_json = j.at("marks");
  if (!marks_json.is_array() || marks_json.size() != 4)
    fail(Errc::parse_error, "exactly 4 marks required");
  std::array<BoundaryLocation, 4> marks{};
  for (int i = 0; i < 4; ++i) {
    const auto& m = marks_json[i];
    if (!m.is_object() || !m.contains("edge") || !m.contains("t"))
      fail(Errc::parse_error, "mark must be {\"edge\":i,\"t\":f}");
    marks[i] = {m.at("edge").get<int>(), m.at("t").get<double>()};
  }
  return mark_quadrilateral(validate_polygon(std::move(verts)), marks);
}

inline MarkedQuadrilateral quad_from_string(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::parse_error, "invalid JSON");
  return quad_from_json(j);
}

inline MarkedQuadrilateral load_quad(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return quad_from_string(buf.str());
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::parse_error, "cannot open " + path + " for writing");
  out << text;
}

}  // namespace quadlab
