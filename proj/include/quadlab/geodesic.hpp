// Shortest internal paths between opposite sides of a marked quadrilateral.
//
// Geodesics in a simple polygon are polylines that bend only at reflex
// vertices, so the solver searches a visibility graph over
// {reflex vertices, marked points, side sub-segment endpoints}, augmented
// with per-node connections to the side sub-segments (perpendicular foot or
// nearest visible endpoint) and the direct side-to-side candidate. No
// discretization is involved; lengths are exact up to double rounding.
//
// The truncated variant constrains only the path endpoints to stay outside
// open disks around the relevant marked points; the path interior is free.

#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "edge_grid.hpp"
#include "geometry.hpp"

namespace quadlab {

struct GeodesicResult {
  Polyline path;
  double length = 0.0;
  std::pair<SideId, SideId> endpoint_sides{SideId::A1, SideId::A2};
  std::array<BoundaryLocation, 2> endpoint_locations{};
};

struct ExclusionSpec {
  double delta = 0.0;
};

struct DeltaCheck {
  bool ok = false;
  double limit = 0.0;     // supremum of valid deltas: min(bounds) / 10
  std::string violated;   // which bound failed, empty when ok
};

// Eq-style validity conditions: 10*delta must be strictly below every side
// diameter and below the distance between both opposite side pairs.
inline DeltaCheck validate_exclusion_delta(const MarkedQuadrilateral& q, double delta) {
  DeltaCheck r;
  double limit = std::numeric_limits<double>::infinity();
  std::string argmin;
  auto track = [&](double v, const std::string& name) {
    if (v < limit) {
      limit = v;
      argmin = name;
    }
  };
  std::array<Polyline, 4> arcs;
  for (int s = 0; s < 4; ++s) {
    arcs[s] = side_arc(q, static_cast<SideId>(s));
    track(arc_diameter(arcs[s]), std::string("diam(") + to_string(static_cast<SideId>(s)) + ")");
  }
  track(side_set_distance(arcs[0], arcs[2]), "dist(A1,A2)");
  track(side_set_distance(arcs[1], arcs[3]), "dist(B1,B2)");
  r.limit = limit / 10.0;
  r.ok = delta > 0.0 && 10.0 * delta < limit;
  if (!r.ok)
    r.violated = delta <= 0.0 ? "delta must be positive"
                              : "10*delta >= " + argmin;
  return r;
}

namespace detail {

// Whether the closed segment [a,b] stays inside the closed polygon. Touching
// or running along the boundary is allowed; leaving the closure is not.
inline bool segment_in_polygon(const SimplePolygon& poly, const EdgeGrid& grid, Point a,
                               Point b) {
  if (a == b) return contains_point(poly, a) != Region::outside;

  std::vector<int> cand;
  grid.for_candidates(a, b, [&](int e) { cand.push_back(e); });
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  for (int e : cand) {
    auto [p, q] = poly.edge(e);
    if (properly_cross(a, b, p, q)) return false;
  }

  // Split [a,b] at every boundary contact and test one interior point of
  // each piece. Contacts arise from collinear overlaps, vertex touches, and
  // segment endpoints lying on an edge.
  const Point d = b - a;
  const double dd = norm2(d);
  auto param = [&](Point p) { return std::clamp(dot(p - a, d) / dd, 0.0, 1.0); };

  std::vector<double> ts{0.0, 1.0};
  for (int e : cand) {
    auto [p, q] = poly.edge(e);
    const bool pcol = orient(a, b, p) == 0;
    const bool qcol = orient(a, b, q) == 0;
    if (pcol && qcol) {
      double tp = param(p), tq = param(q);
      if (tp > tq) std::swap(tp, tq);
      ts.push_back(tp);
      ts.push_back(tq);
    } else {
      if (on_segment(p, a, b)) ts.push_back(param(p));
      if (on_segment(q, a, b)) ts.push_back(param(q));
      if (on_segment(a, p, q)) ts.push_back(0.0);
      if (on_segment(b, p, q)) ts.push_back(1.0);
    }
  }
  std::sort(ts.begin(), ts.end());

  const double eta = poly.tolerance();
  const double len = std::sqrt(dd);
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    if ((ts[i + 1] - ts[i]) * len <= eta) continue;
    const Point m = lerp(a, b, 0.5 * (ts[i] + ts[i + 1]));
    if (contains_point(poly, m) == Region::outside &&
        distance_to_boundary(poly, m) > eta)
      return false;
  }
  return true;
}

struct Attachment {
  bool ok = false;
  double cost = std::numeric_limits<double>::infinity();
  Point point;
  BoundaryLocation loc;
};

// Shortest visible connection from u to a set of boundary sub-segments:
// perpendicular foot when it lands inside a sub-segment, endpoints otherwise.
// Candidates are visited in distance order so the expensive visibility test
// stops at the first visible one (plus its cost ties).
inline Attachment best_attachment(const SimplePolygon& poly, const EdgeGrid& grid, Point u,
                                  std::span<const BoundarySegment> segs) {
  struct Cand {
    double cost;
    Point point;
    BoundaryLocation loc;
  };
  std::vector<Cand> cands;
  cands.reserve(segs.size() * 3);
  for (const BoundarySegment& seg : segs) {
    for (double t : {closest_param(u, seg.a, seg.b), 0.0, 1.0}) {
      const Point c = lerp(seg.a, seg.b, t);
      cands.push_back({dist(u, c), c, poly.normalized(seg.location_at(t))});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return a.cost != b.cost ? a.cost < b.cost : a.loc < b.loc;
  });
  Attachment best;
  for (const Cand& c : cands) {
    const double slack = 1e-15 * (1.0 + c.cost);
    if (best.ok && c.cost > best.cost + slack) break;
    if (best.ok && !(c.loc < best.loc)) continue;
    if (segment_in_polygon(poly, grid, u, c.point)) best = {true, c.cost, c.point, c.loc};
  }
  return best;
}

}  // namespace detail

// Core solver over explicit source/target sub-segment sets. `extra_nodes`
// adds bend candidates beyond the polygon's reflex vertices (marked points).
inline GeodesicResult solve_geodesic(const SimplePolygon& poly,
                                     std::span<const Point> extra_nodes,
                                     std::span<const BoundarySegment> src,
                                     std::span<const BoundarySegment> tgt,
                                     std::pair<SideId, SideId> side_ids) {
  using detail::Attachment;
  const EdgeGrid grid(poly);
  const double eta = poly.tolerance();

  std::vector<Point> nodes;
  auto add_node = [&](Point p) {
    for (const Point& q : nodes)
      if (q == p) return;
    nodes.push_back(p);
  };
  for (int i = 0; i < poly.size(); ++i)
    if (poly.reflex(i)) add_node(poly.vertex(i));
  for (const Point& p : extra_nodes) add_node(p);
  for (const auto& seg : src) {
    add_node(seg.a);
    add_node(seg.b);
  }
  for (const auto& seg : tgt) {
    add_node(seg.a);
    add_node(seg.b);
  }
  const int n = static_cast<int>(nodes.size());

  std::vector<Attachment> to_src(n), to_tgt(n);
  for (int i = 0; i < n; ++i) {
    to_src[i] = detail::best_attachment(poly, grid, nodes[i], src);
    to_tgt[i] = detail::best_attachment(poly, grid, nodes[i], tgt);
  }

  // Dijkstra from the virtual source through the visibility graph.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dd(n, inf);
  std::vector<int> parent(n, -1);
  std::vector<char> done(n, 0);
  std::vector<std::vector<char>> vis(n);  // lazily filled visibility cache
  for (int i = 0; i < n; ++i) vis[i].assign(n, 2);
  auto visible = [&](int i, int j) {
    if (vis[i][j] != 2) return vis[i][j] == 1;
    const bool v = detail::segment_in_polygon(poly, grid, nodes[i], nodes[j]);
    vis[i][j] = vis[j][i] = v ? 1 : 0;
    return v;
  };
  for (int i = 0; i < n; ++i)
    if (to_src[i].ok) dd[i] = to_src[i].cost;
  for (int iter = 0; iter < n; ++iter) {
    int u = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && dd[i] < inf && (u < 0 || dd[i] < dd[u])) u = i;
    if (u < 0) break;
    done[u] = 1;
    for (int v = 0; v < n; ++v) {
      if (done[v] || dd[u] + dist(nodes[u], nodes[v]) >= dd[v]) continue;
      if (!visible(u, v)) continue;
      dd[v] = dd[u] + dist(nodes[u], nodes[v]);
      parent[v] = u;
    }
  }

  struct Candidate {
    double length = inf;
    BoundaryLocation src_loc, tgt_loc;
    Point src_pt, tgt_pt;
    int exit_node = -1;  // -1: direct segment
  };
  Candidate best;
  auto better = [&](const Candidate& c) {
    const double slack = eta;
    if (c.length < best.length - slack) return true;
    if (c.length > best.length + slack) return false;
    if (c.src_loc < best.src_loc) return true;
    if (best.src_loc < c.src_loc) return false;
    return c.tgt_loc < best.tgt_loc;
  };

  // Direct side-to-side candidates.
  for (const auto& s : src) {
    for (const auto& t : tgt) {
      const SegmentClosest cp = segment_segment_closest(s.a, s.b, t.a, t.b);
      const Point ps = lerp(s.a, s.b, cp.s);
      const Point pt = lerp(t.a, t.b, cp.t);
      if (!detail::segment_in_polygon(poly, grid, ps, pt)) continue;
      Candidate c{dist(ps, pt), poly.normalized(s.location_at(cp.s)),
                  poly.normalized(t.location_at(cp.t)), ps, pt, -1};
      if (better(c)) best = c;
    }
  }
  // Through-node candidates.
  for (int i = 0; i < n; ++i) {
    if (dd[i] >= inf || !to_tgt[i].ok) continue;
    int root = i;
    while (parent[root] >= 0) root = parent[root];
    Candidate c{dd[i] + to_tgt[i].cost, to_src[root].loc, to_tgt[i].loc,
                to_src[root].point, to_tgt[i].point, i};
    if (better(c)) best = c;
  }

  if (best.length >= inf)
    fail(Errc::invalid_argument, "no internal path found between the sides");

  GeodesicResult res;
  res.endpoint_sides = side_ids;
  res.endpoint_locations = {best.src_loc, best.tgt_loc};
  if (best.exit_node < 0) {
    res.path.pts = {best.src_pt, best.tgt_pt};
  } else {
    std::vector<Point> chain;
    for (int u = best.exit_node; u >= 0; u = parent[u]) chain.push_back(nodes[u]);
    res.path.pts.push_back(best.src_pt);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      if (res.path.pts.back() != *it) res.path.pts.push_back(*it);
    if (res.path.pts.back() != best.tgt_pt) res.path.pts.push_back(best.tgt_pt);
  }
  res.length = res.path.length();
  return res;
}

// Removes the parts of the sub-segments that fall inside any of the open
// disks D(center, radius); endpoints exactly on a circle are kept.
inline std::vector<BoundarySegment> clip_outside_disks(std::span<const BoundarySegment> segs,
                                                       std::span<const Point> centers,
                                                       double radius) {
  std::vector<BoundarySegment> out;
  for (const BoundarySegment& seg : segs) {
    // Collect the sub-intervals of [0,1] inside some disk, then emit the
    // complement.
    std::vector<std::pair<double, double>> covered;
    const Point d = seg.b - seg.a;
    const double dd = norm2(d);
    for (const Point& c : centers) {
      const Point w = seg.a - c;
      // |w + t d|^2 < r^2
      const double A = dd, B = 2.0 * dot(w, d), C = norm2(w) - radius * radius;
      if (A == 0.0) continue;
      const double disc = B * B - 4.0 * A * C;
      if (disc <= 0.0) continue;
      const double sq = std::sqrt(disc);
      double t0 = (-B - sq) / (2.0 * A);
      double t1 = (-B + sq) / (2.0 * A);
      t0 = std::max(t0, 0.0);
      t1 = std::min(t1, 1.0);
      if (t0 < t1) covered.emplace_back(t0, t1);
    }
    std::sort(covered.begin(), covered.end());
    double cursor = 0.0;
    auto emit = [&](double u0, double u1) {
      if (u1 - u0 <= 1e-15) return;
      out.push_back({lerp(seg.a, seg.b, u0), lerp(seg.a, seg.b, u1), seg.edge,
                     seg.t0 + u0 * (seg.t1 - seg.t0), seg.t0 + u1 * (seg.t1 - seg.t0)});
    };
    for (const auto& [c0, c1] : covered) {
      if (c0 > cursor) emit(cursor, c0);
      cursor = std::max(cursor, c1);
    }
    if (cursor < 1.0) emit(cursor, 1.0);
  }
  return out;
}

// Internal distance between the two sides of a pair: s_a for pair A, s_b for
// pair B.
inline GeodesicResult geodesic_between_sides(const MarkedQuadrilateral& q, SidePair pair) {
  const auto [s1, s2] = sides_of(pair);
  const SideChain c1 = side_chain(q, s1);
  const SideChain c2 = side_chain(q, s2);
  std::vector<Point> marks;
  for (int j = 0; j < 4; ++j) marks.push_back(q.mark_point(j));
  return solve_geodesic(q.polygon(), marks, c1.segs, c2.segs, {s1, s2});
}

// Truncated internal distance s^delta: endpoints avoid the open disks
// D(v_j, delta) around the side's own marked endpoints.
inline GeodesicResult truncated_internal_distance(const MarkedQuadrilateral& q, SidePair pair,
                                                  const ExclusionSpec& spec) {
  const DeltaCheck check = validate_exclusion_delta(q, spec.delta);
  if (!check.ok) fail(Errc::invalid_delta, "invalid exclusion delta: " + check.violated);

  const auto [s1, s2] = sides_of(pair);
  auto clipped = [&](SideId s) {
    const SideChain chain = side_chain(q, s);
    const int j = static_cast<int>(s);
    const std::array<Point, 2> centers{q.mark_point(j), q.mark_point((j + 1) % 4)};
    auto segs = clip_outside_disks(chain.segs, centers, spec.delta);
    if (segs.empty())
      fail(Errc::invalid_delta, "exclusion disks swallowed a side arc");
    return segs;
  };
  const auto src = clipped(s1);
  const auto tgt = clipped(s2);
  std::vector<Point> marks;
  for (int j = 0; j < 4; ++j) marks.push_back(q.mark_point(j));
  return solve_geodesic(q.polygon(), marks, src, tgt, {s1, s2});
}

}  // namespace quadlab
