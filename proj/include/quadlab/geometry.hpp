// Planar primitives: simple polygons, boundary parameterization, marked
// quadrilaterals, containment and distance queries.
//
// Orientation and incidence decisions go through the exact predicate in
// predicates.hpp; metric outputs are plain double precision. Fuzzy
// comparisons, where unavoidable, use a single global tolerance
// eta = 1e-9 * (bounding box diagonal).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "predicates.hpp"

namespace quadlab {

// ---------------------------------------------------------------------------
// Errors

enum class Errc {
  self_intersection,
  degenerate_edge,
  marks_not_distinct,
  marks_out_of_order,
  invalid_delta,
  grid_too_coarse,
  not_rectilinear,
  coordinates_not_on_grid,
  solver_diverged,
  non_positive_distance,
  ratio_bound_violated,
  modulus_out_of_range,
  iteration_cap,
  generation_failed,
  invalid_params,
  parse_error,
  invalid_argument,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

// ---------------------------------------------------------------------------
// Point

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend Point operator*(Point p, double s) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(Point a, Point b) { return !(a == b); }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Point p) { return p.x * p.x + p.y * p.y; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }
inline Point lerp(Point a, Point b, double t) {
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

inline int orient(Point a, Point b, Point c) { return orient2d(a.x, a.y, b.x, b.y, c.x, c.y); }

// Exact: p lies on the closed segment [a, b].
inline bool on_segment(Point p, Point a, Point b) {
  if (orient(a, b, p) != 0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Exact: open segments (a,b) and (c,d) cross transversally.
inline bool properly_cross(Point a, Point b, Point c, Point d) {
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

// Exact: closed segments [a,b] and [c,d] share at least one point.
inline bool segments_touch(Point a, Point b, Point c, Point d) {
  if (properly_cross(a, b, c, d)) return true;
  return on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) ||
         on_segment(b, c, d);
}

// Parameter of the point on [a,b] closest to p, clamped to [0,1].
inline double closest_param(Point p, Point a, Point b) {
  const Point d = b - a;
  const double dd = norm2(d);
  if (dd == 0.0) return 0.0;
  return std::clamp(dot(p - a, d) / dd, 0.0, 1.0);
}

inline double point_segment_distance(Point p, Point a, Point b) {
  return dist(p, lerp(a, b, closest_param(p, a, b)));
}

// Closest pair between segments [a,b] and [c,d]. Ties (parallel overlap) are
// resolved toward the smallest parameter on the first segment, then on the
// second, so the result is deterministic.
struct SegmentClosest {
  double s = 0.0;  // parameter on [a,b]
  double t = 0.0;  // parameter on [c,d]
  double d = 0.0;
};

inline SegmentClosest segment_segment_closest(Point a, Point b, Point c, Point d) {
  SegmentClosest best;
  best.d = std::numeric_limits<double>::infinity();
  auto consider = [&](double s, double t) {
    const double dd = dist(lerp(a, b, s), lerp(c, d, t));
    const double slack = 1e-15 * (1.0 + dd);
    if (dd < best.d - slack ||
        (dd <= best.d + slack && (s < best.s || (s == best.s && t < best.t)))) {
      best = {s, t, dd};
    }
  };
  const Point u = b - a, v = d - c, w = a - c;
  const double A = norm2(u), B = dot(u, v), C = norm2(v);
  const double D = dot(u, w), E = dot(v, w);
  const double det = A * C - B * B;
  if (det > 1e-14 * A * C) {
    const double s = std::clamp((B * E - C * D) / det, 0.0, 1.0);
    const double t = std::clamp((A * E - B * D) / det, 0.0, 1.0);
    consider(s, t);
  }
  // Endpoint projections cover clamped and (near-)parallel configurations.
  consider(closest_param(c, a, b), 0.0);
  consider(closest_param(d, a, b), 1.0);
  consider(0.0, closest_param(a, c, d));
  consider(1.0, closest_param(b, c, d));
  return best;
}

inline double segment_segment_distance(Point a, Point b, Point c, Point d) {
  if (segments_touch(a, b, c, d)) return 0.0;
  return segment_segment_closest(a, b, c, d).d;
}

struct Box {
  Point lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  void expand(Point p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  double diagonal() const { return dist(lo, hi); }
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
};

// ---------------------------------------------------------------------------
// Boundary locations

// Position on a polygon boundary: parameter t in [0,1) along edge `edge`.
struct BoundaryLocation {
  int edge = 0;
  double t = 0.0;

  friend bool operator==(BoundaryLocation a, BoundaryLocation b) {
    return a.edge == b.edge && a.t == b.t;
  }
  friend bool operator<(BoundaryLocation a, BoundaryLocation b) {
    return a.edge != b.edge ? a.edge < b.edge : a.t < b.t;
  }
  // Monotone scalar key along the boundary cycle.
  double key() const { return static_cast<double>(edge) + t; }
};

// ---------------------------------------------------------------------------
// SimplePolygon

class SimplePolygon {
 public:
  SimplePolygon() = default;

  int size() const { return static_cast<int>(verts_.size()); }
  const std::vector<Point>& vertices() const { return verts_; }
  Point vertex(int i) const { return verts_[mod(i)]; }
  std::pair<Point, Point> edge(int i) const { return {verts_[mod(i)], verts_[mod(i + 1)]}; }
  double edge_length(int i) const { return cum_[mod(i) + 1] - cum_[mod(i)]; }

  double area() const { return area_; }
  double perimeter() const { return cum_.back(); }
  Box bbox() const { return bbox_; }
  // Global fuzzy-comparison tolerance.
  double tolerance() const { return 1e-9 * bbox_.diagonal(); }

  bool reflex(int i) const { return reflex_[mod(i)]; }

  Point point_at(BoundaryLocation loc) const {
    auto [a, b] = edge(loc.edge);
    return lerp(a, b, loc.t);
  }
  double arclength_at(BoundaryLocation loc) const {
    return cum_[mod(loc.edge)] + loc.t * edge_length(loc.edge);
  }
  BoundaryLocation location_at_arclength(double s) const {
    const double p = perimeter();
    s = std::fmod(s, p);
    if (s < 0) s += p;
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    int e = static_cast<int>(it - cum_.begin()) - 1;
    e = std::min(e, size() - 1);
    const double len = edge_length(e);
    double t = len > 0 ? (s - cum_[e]) / len : 0.0;
    return normalized(BoundaryLocation{e, t});
  }
  // Canonical form: t in [0,1), t == 1 rolls over to the next edge.
  BoundaryLocation normalized(BoundaryLocation loc) const {
    int e = mod(loc.edge);
    double t = loc.t;
    if (t >= 1.0) {
      e = mod(e + 1);
      t = 0.0;
    }
    if (t < 0.0) t = 0.0;
    return {e, t};
  }

  int mod(int i) const {
    const int n = size();
    i %= n;
    return i < 0 ? i + n : i;
  }

  friend SimplePolygon validate_polygon(std::vector<Point> vertices);

 private:
  std::vector<Point> verts_;
  std::vector<double> cum_;  // cum_[i] = arclength from vertex 0 to vertex i
  std::vector<bool> reflex_;
  double area_ = 0.0;
  Box bbox_;
};

// Validates and normalizes a polygon: collapses consecutive duplicate
// vertices, reverses clockwise input to counter-clockwise, rejects
// self-intersecting or degenerate chains.
inline SimplePolygon validate_polygon(std::vector<Point> vertices) {
  for (const Point& p : vertices)
    if (!finite(p)) fail(Errc::invalid_argument, "polygon vertex is not finite");
  // Collapse exact consecutive duplicates (including last == first).
  std::vector<Point> v;
  v.reserve(vertices.size());
  for (const Point& p : vertices)
    if (v.empty() || !(v.back() == p)) v.push_back(p);
  while (v.size() > 1 && v.front() == v.back()) v.pop_back();
  if (v.size() < 3) fail(Errc::degenerate_edge, "polygon has fewer than 3 distinct vertices");

  const int n = static_cast<int>(v.size());
  auto at = [&](int i) { return v[((i % n) + n) % n]; };

  // Adjacent edges may share only their common vertex: a fold-back spike
  // (collinear, same direction) is a self-intersection.
  auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
  for (int i = 0; i < n; ++i) {
    const Point p = at(i - 1), q = at(i), r = at(i + 1);
    if (orient(p, q, r) == 0 &&
        sgn(r.x - q.x) == sgn(p.x - q.x) && sgn(r.y - q.y) == sgn(p.y - q.y))
      fail(Errc::self_intersection, "fold-back spike at vertex " + std::to_string(i));
  }
  // Non-adjacent edges must be disjoint.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_touch(at(i), at(i + 1), at(j), at(j + 1)))
        fail(Errc::self_intersection,
             "edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
    }
  }

  double twice_area = 0.0;
  for (int i = 0; i < n; ++i) twice_area += cross(at(i), at(i + 1));
  if (twice_area == 0.0) fail(Errc::degenerate_edge, "polygon has zero area");
  if (twice_area < 0.0) std::reverse(v.begin(), v.end());  // normalize to CCW

  SimplePolygon poly;
  poly.verts_ = std::move(v);
  poly.area_ = std::abs(twice_area) / 2.0;
  poly.cum_.resize(poly.verts_.size() + 1);
  poly.cum_[0] = 0.0;
  for (int i = 0; i < poly.size(); ++i)
    poly.cum_[i + 1] = poly.cum_[i] + dist(poly.verts_[i], poly.verts_[(i + 1) % poly.size()]);
  poly.reflex_.resize(poly.verts_.size());
  for (int i = 0; i < poly.size(); ++i) {
    poly.reflex_[i] =
        orient(poly.vertex(i - 1), poly.vertex(i), poly.vertex(i + 1)) < 0;
    poly.bbox_.expand(poly.verts_[i]);
  }
  return poly;
}

// ---------------------------------------------------------------------------
// Containment / distance queries

enum class Region { inside, boundary, outside };

inline Region contains_point(const SimplePolygon& poly, Point p) {
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    auto [a, b] = poly.edge(i);
    if (on_segment(p, a, b)) return Region::boundary;
  }
  // Crossing number against the upward ray from p; exact by construction.
  int crossings = 0;
  for (int i = 0; i < n; ++i) {
    auto [a, b] = poly.edge(i);
    if ((a.y <= p.y) && (b.y > p.y)) {
      if (orient(a, b, p) > 0) ++crossings;  // upward edge, p strictly left
    } else if ((b.y <= p.y) && (a.y > p.y)) {
      if (orient(a, b, p) < 0) ++crossings;  // downward edge, p strictly right
    }
  }
  return (crossings & 1) ? Region::inside : Region::outside;
}

inline double distance_to_boundary(const SimplePolygon& poly, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < poly.size(); ++i) {
    auto [a, b] = poly.edge(i);
    best = std::min(best, point_segment_distance(p, a, b));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Sides and marked quadrilaterals

enum class SideId { A1, B1, A2, B2 };
enum class SidePair { A, B };

inline SidePair pair_of(SideId s) {
  return (s == SideId::A1 || s == SideId::A2) ? SidePair::A : SidePair::B;
}
inline std::pair<SideId, SideId> sides_of(SidePair p) {
  return p == SidePair::A ? std::pair{SideId::A1, SideId::A2}
                          : std::pair{SideId::B1, SideId::B2};
}
inline const char* to_string(SideId s) {
  switch (s) {
    case SideId::A1: return "A1";
    case SideId::B1: return "B1";
    case SideId::A2: return "A2";
    case SideId::B2: return "B2";
  }
  return "?";
}

struct Polyline {
  std::vector<Point> pts;

  double length() const {
    double s = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) s += dist(pts[i], pts[i + 1]);
    return s;
  }
  bool empty() const { return pts.empty(); }
  Point point_at_arclength(double s) const {
    if (pts.size() == 1) return pts[0];
    double acc = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      const double len = dist(pts[i], pts[i + 1]);
      if (acc + len >= s || i + 2 == pts.size())
        return len > 0 ? lerp(pts[i], pts[i + 1], std::clamp((s - acc) / len, 0.0, 1.0))
                       : pts[i];
      acc += len;
    }
    return pts.back();
  }
};

// One straight piece of a side arc, with its provenance on the polygon
// boundary: the sub-segment of `edge` between parameters t0 < t1.
struct BoundarySegment {
  Point a, b;
  int edge = 0;
  double t0 = 0.0, t1 = 1.0;

  BoundaryLocation location_at(double u) const {
    return {edge, t0 + u * (t1 - t0)};
  }
};

struct SideChain {
  SideId id{};
  std::vector<BoundarySegment> segs;

  Polyline polyline() const {
    Polyline pl;
    for (size_t i = 0; i < segs.size(); ++i) {
      if (i == 0) pl.pts.push_back(segs[i].a);
      pl.pts.push_back(segs[i].b);
    }
    return pl;
  }
  double length() const {
    double s = 0.0;
    for (const auto& seg : segs) s += dist(seg.a, seg.b);
    return s;
  }
};

class MarkedQuadrilateral {
 public:
  MarkedQuadrilateral() = default;

  const SimplePolygon& polygon() const { return poly_; }
  const std::array<BoundaryLocation, 4>& marks() const { return marks_; }
  Point mark_point(int j) const { return poly_.point_at(marks_[j]); }

  friend MarkedQuadrilateral mark_quadrilateral(SimplePolygon poly,
                                                std::array<BoundaryLocation, 4> marks);

 private:
  SimplePolygon poly_;
  std::array<BoundaryLocation, 4> marks_{};
};

inline MarkedQuadrilateral mark_quadrilateral(SimplePolygon poly,
                                              std::array<BoundaryLocation, 4> marks) {
  for (auto& m : marks) {
    if (m.edge < 0 || m.edge >= poly.size())
      fail(Errc::invalid_argument, "mark edge index out of range");
    if (!(m.t >= 0.0 && m.t <= 1.0))
      fail(Errc::invalid_argument, "mark parameter outside [0,1]");
    m = poly.normalized(m);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (marks[i] == marks[j]) fail(Errc::marks_not_distinct, "two marks coincide");
  // Strictly increasing cyclic order, measured from the first mark.
  const double n = poly.size();
  auto rel = [&](int j) {
    double d = marks[j].key() - marks[0].key();
    if (d < 0) d += n;
    return d;
  };
  if (!(0 < rel(1) && rel(1) < rel(2) && rel(2) < rel(3)))
    fail(Errc::marks_out_of_order, "marks are not in counter-clockwise cyclic order");

  MarkedQuadrilateral q;
  q.poly_ = std::move(poly);
  q.marks_ = marks;
  return q;
}

// The side arc from mark j to mark j+1 (cyclic), walked counter-clockwise.
inline SideChain side_chain(const MarkedQuadrilateral& q, SideId s) {
  const SimplePolygon& poly = q.polygon();
  const int j = static_cast<int>(s);
  const BoundaryLocation from = q.marks()[j];
  const BoundaryLocation to = q.marks()[(j + 1) % 4];

  SideChain chain;
  chain.id = s;
  int e = from.edge;
  double t = from.t;
  while (true) {
    auto [a, b] = poly.edge(e);
    if (e == to.edge && t <= to.t) {
      if (t < to.t) chain.segs.push_back({lerp(a, b, t), lerp(a, b, to.t), e, t, to.t});
      break;
    }
    if (t < 1.0) chain.segs.push_back({lerp(a, b, t), b, e, t, 1.0});
    e = poly.mod(e + 1);
    t = 0.0;
    if (chain.segs.size() > static_cast<size_t>(poly.size()) + 4)
      fail(Errc::invalid_argument, "side arc failed to close");
  }
  if (chain.segs.empty()) fail(Errc::invalid_argument, "empty side arc");
  return chain;
}

inline Polyline side_arc(const MarkedQuadrilateral& q, SideId s) {
  return side_chain(q, s).polyline();
}

// Euclidean diameter of a polyline. For a union of segments the diameter is
// attained at segment endpoints, so the vertex-pair maximum is exact.
inline double arc_diameter(const Polyline& pl) {
  if (pl.pts.empty()) fail(Errc::invalid_argument, "arc_diameter of empty polyline");
  double best = 0.0;
  for (size_t i = 0; i < pl.pts.size(); ++i)
    for (size_t j = i + 1; j < pl.pts.size(); ++j)
      best = std::max(best, dist(pl.pts[i], pl.pts[j]));
  return best;
}

inline double side_set_distance(const Polyline& p1, const Polyline& p2) {
  if (p1.pts.empty() || p2.pts.empty())
    fail(Errc::invalid_argument, "side_set_distance of empty polyline");
  // Single points act as degenerate segments.
  const size_t n1 = std::max<size_t>(p1.pts.size(), 2) - 1;
  const size_t n2 = std::max<size_t>(p2.pts.size(), 2) - 1;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n1; ++i) {
    const Point a = p1.pts[i], b = p1.pts[std::min(i + 1, p1.pts.size() - 1)];
    for (size_t j = 0; j < n2; ++j) {
      const Point c = p2.pts[j], d = p2.pts[std::min(j + 1, p2.pts.size() - 1)];
      best = std::min(best, segment_segment_distance(a, b, c, d));
    }
  }
  return best;
}

inline MarkedQuadrilateral scaled(const MarkedQuadrilateral& q, double lambda) {
  std::vector<Point> v;
  v.reserve(q.polygon().size());
  for (const Point& p : q.polygon().vertices()) v.push_back(lambda * p);
  return mark_quadrilateral(validate_polygon(std::move(v)), q.marks());
}

}  // namespace quadlab
