// Grid-square approximation: inscribe a rectilinear marked quadrilateral
// Q_tau in a polygonal quadrilateral Q with controlled internal-distance
// deviation.
//
// Pipeline: cover the boundary with closed grid squares (S), take the
// 4-connected component of the uncovered cells containing the pole of
// inaccessibility, march its cell boundary into a simple rectilinear
// polygon, transfer the marks to the nearest boundary points, then verify
// the conclusions directly: containment, mark order, side correspondence,
// and the deviation bounds measured with the geodesic solver.
//
// 4-connectivity keeps diagonally touching covered cells blocking, which is
// what makes the extracted boundary simple; the rare corner-contact case is
// detected and reported so the caller can jitter the grid origin and retry.

#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "geodesic.hpp"
#include "inscribed_disk.hpp"

namespace quadlab {

struct GridSpec {
  double s = 0.0;
  Point origin{0.0, 0.0};
};

struct Cell {
  long long x = 0, y = 0;
  friend bool operator==(Cell a, Cell b) { return a.x == b.x && a.y == b.y; }
};

namespace detail {

inline std::uint64_t pack_cell(long long x, long long y) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
         static_cast<std::uint32_t>(y);
}
inline Cell unpack_cell(std::uint64_t k) {
  return {static_cast<std::int32_t>(k >> 32), static_cast<std::int32_t>(k & 0xffffffffu)};
}

// Exact SAT: closed segment vs closed axis-aligned square.
inline bool segment_touches_box(Point a, Point b, Point lo, Point hi) {
  if (std::max(a.x, b.x) < lo.x || std::min(a.x, b.x) > hi.x) return false;
  if (std::max(a.y, b.y) < lo.y || std::min(a.y, b.y) > hi.y) return false;
  const int o1 = orient(a, b, {lo.x, lo.y});
  const int o2 = orient(a, b, {hi.x, lo.y});
  const int o3 = orient(a, b, {hi.x, hi.y});
  const int o4 = orient(a, b, {lo.x, hi.y});
  if (o1 > 0 && o2 > 0 && o3 > 0 && o4 > 0) return false;
  if (o1 < 0 && o2 < 0 && o3 < 0 && o4 < 0) return false;
  return true;
}

// Does the open segment pass through the open box interior?
inline bool segment_enters_open_box(Point a, Point b, Point lo, Point hi) {
  // Liang-Barsky clip of [a,b] to the closed box, then test the midpoint of
  // the clipped piece against the open box.
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x, dy = b.y - a.y;
  auto clip = [&](double p, double q) {
    if (p == 0.0) return q >= 0.0;
    const double r = q / p;
    if (p < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
    return true;
  };
  if (!clip(-dx, a.x - lo.x) || !clip(dx, hi.x - a.x) || !clip(-dy, a.y - lo.y) ||
      !clip(dy, hi.y - a.y) || t0 > t1)
    return false;
  const Point m = lerp(a, b, 0.5 * (t0 + t1));
  return lo.x < m.x && m.x < hi.x && lo.y < m.y && m.y < hi.y;
}

}  // namespace detail

// Cells whose closed square meets the polygon boundary; cells that only
// graze the boundary from outside the domain (their open square misses the
// open polygon) are not part of the cover.
inline std::vector<Cell> grid_cover(const SimplePolygon& poly, const GridSpec& spec) {
  if (!(spec.s > 0.0)) fail(Errc::invalid_argument, "grid side must be positive");
  const double s = spec.s;
  std::unordered_map<std::uint64_t, char> touched;  // 1 = frame only, 2 = open passage
  for (int e = 0; e < poly.size(); ++e) {
    auto [a, b] = poly.edge(e);
    const long long x0 = static_cast<long long>(std::floor((std::min(a.x, b.x) - spec.origin.x) / s)) - 1;
    const long long x1 = static_cast<long long>(std::floor((std::max(a.x, b.x) - spec.origin.x) / s)) + 1;
    const long long y0 = static_cast<long long>(std::floor((std::min(a.y, b.y) - spec.origin.y) / s)) - 1;
    const long long y1 = static_cast<long long>(std::floor((std::max(a.y, b.y) - spec.origin.y) / s)) + 1;
    for (long long cy = y0; cy <= y1; ++cy) {
      for (long long cx = x0; cx <= x1; ++cx) {
        const Point lo{spec.origin.x + cx * s, spec.origin.y + cy * s};
        const Point hi{lo.x + s, lo.y + s};
        if (!detail::segment_touches_box(a, b, lo, hi)) continue;
        char& flag = touched[detail::pack_cell(cx, cy)];
        if (flag < 2 && detail::segment_enters_open_box(a, b, lo, hi)) flag = 2;
        if (flag < 1) flag = 1;
      }
    }
  }
  std::vector<Cell> out;
  out.reserve(touched.size());
  for (const auto& [key, flag] : touched) {
    const Cell c = detail::unpack_cell(key);
    if (flag < 2) {
      // Frame-only contact: keep the cell only if its (boundary-free) open
      // square lies in the domain; the center decides.
      const Point center{spec.origin.x + (c.x + 0.5) * s, spec.origin.y + (c.y + 0.5) * s};
      if (contains_point(poly, center) != Region::inside) continue;
    }
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(),
            [](Cell a, Cell b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  return out;
}

struct RectifiedQuad {
  MarkedQuadrilateral quad;  // Q_tau
  double s_used = 0.0;
  Point origin_used;
  double s_a_q = 0.0, s_b_q = 0.0;    // internal distances of Q
  double s_a_t = 0.0, s_b_t = 0.0;    // internal distances of Q_tau
  double dev_a = 0.0, dev_b = 0.0;
  double achieved_tau = 0.0;
  double ratio_q = 0.0, ratio_qt = 0.0;
  double l_tau = 0.0;  // (1+tau)/(1-tau) * ratio(Q) at the achieved tau
  bool ratio_within = false;
};

namespace detail {

// Marches the outer boundary of a 4-connected cell component into a CCW
// simple rectilinear polygon (in cell units). Corner contacts (lattice
// points with four incident boundary edges) are reported as failures.
inline std::vector<Cell> trace_component_boundary(
    const std::unordered_set<std::uint64_t>& comp) {
  std::unordered_map<std::uint64_t, std::uint64_t> next;  // start point -> end point
  auto has = [&](long long x, long long y) {
    return comp.count(pack_cell(x, y)) != 0;
  };
  for (std::uint64_t key : comp) {
    const Cell c = unpack_cell(key);
    // Interior on the left of each directed edge.
    if (!has(c.x, c.y - 1)) {
      if (!next.emplace(pack_cell(c.x, c.y), pack_cell(c.x + 1, c.y)).second)
        fail(Errc::grid_too_coarse, "corner contact while tracing the cell boundary");
    }
    if (!has(c.x + 1, c.y)) {
      if (!next.emplace(pack_cell(c.x + 1, c.y), pack_cell(c.x + 1, c.y + 1)).second)
        fail(Errc::grid_too_coarse, "corner contact while tracing the cell boundary");
    }
    if (!has(c.x, c.y + 1)) {
      if (!next.emplace(pack_cell(c.x + 1, c.y + 1), pack_cell(c.x, c.y + 1)).second)
        fail(Errc::grid_too_coarse, "corner contact while tracing the cell boundary");
    }
    if (!has(c.x - 1, c.y)) {
      if (!next.emplace(pack_cell(c.x, c.y + 1), pack_cell(c.x, c.y)).second)
        fail(Errc::grid_too_coarse, "corner contact while tracing the cell boundary");
    }
  }
  if (next.empty()) fail(Errc::grid_too_coarse, "empty component");

  const std::uint64_t start = next.begin()->first;
  std::vector<Cell> cycle;
  std::uint64_t cur = start;
  do {
    cycle.push_back(unpack_cell(cur));
    const auto it = next.find(cur);
    if (it == next.end())
      fail(Errc::grid_too_coarse, "open boundary chain while tracing cells");
    cur = it->second;
    if (cycle.size() > next.size())
      fail(Errc::grid_too_coarse, "runaway boundary trace");
  } while (cur != start);
  if (cycle.size() != next.size())
    fail(Errc::grid_too_coarse, "component boundary is not a single cycle");

  // Collapse collinear runs.
  std::vector<Cell> out;
  const int n = static_cast<int>(cycle.size());
  for (int i = 0; i < n; ++i) {
    const Cell p = cycle[(i + n - 1) % n], q = cycle[i], r = cycle[(i + 1) % n];
    const bool straight = (p.x == q.x && q.x == r.x) || (p.y == q.y && q.y == r.y);
    if (!straight) out.push_back(q);
  }
  return out;
}

}  // namespace detail

// One rectification attempt at a fixed grid.
inline RectifiedQuad rectify(const MarkedQuadrilateral& q, const GridSpec& spec) {
  const SimplePolygon& poly = q.polygon();
  const double s = spec.s;

  std::unordered_set<std::uint64_t> covered;
  for (const Cell& c : grid_cover(poly, spec)) covered.insert(detail::pack_cell(c.x, c.y));

  // Any deep interior point works for component selection, so the pole
  // search runs at cell precision only.
  const Point pole = detail::pole_search(poly, s / 8.0).center;
  const long long px = static_cast<long long>(std::floor((pole.x - spec.origin.x) / s));
  const long long py = static_cast<long long>(std::floor((pole.y - spec.origin.y) / s));
  if (covered.count(detail::pack_cell(px, py)))
    fail(Errc::grid_too_coarse, "pole cell is covered by the boundary cells");

  // 4-connected flood fill of the free component containing the pole cell,
  // bounded by the polygon bbox (escaping it means the cover leaked).
  const Box bb = poly.bbox();
  const long long gx0 = static_cast<long long>(std::floor((bb.lo.x - spec.origin.x) / s)) - 2;
  const long long gx1 = static_cast<long long>(std::floor((bb.hi.x - spec.origin.x) / s)) + 2;
  const long long gy0 = static_cast<long long>(std::floor((bb.lo.y - spec.origin.y) / s)) - 2;
  const long long gy1 = static_cast<long long>(std::floor((bb.hi.y - spec.origin.y) / s)) + 2;

  std::unordered_set<std::uint64_t> comp;
  std::vector<Cell> stack{{px, py}};
  comp.insert(detail::pack_cell(px, py));
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    if (c.x < gx0 || c.x > gx1 || c.y < gy0 || c.y > gy1)
      fail(Errc::grid_too_coarse, "free component leaked outside the domain");
    const Cell nbrs[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
    for (const Cell& nb : nbrs) {
      const std::uint64_t key = detail::pack_cell(nb.x, nb.y);
      if (covered.count(key) || comp.count(key)) continue;
      comp.insert(key);
      stack.push_back(nb);
    }
  }

  const std::vector<Cell> corners = detail::trace_component_boundary(comp);
  std::vector<Point> verts;
  verts.reserve(corners.size());
  for (const Cell& c : corners)
    verts.push_back({spec.origin.x + c.x * s, spec.origin.y + c.y * s});
  SimplePolygon qt_poly;
  try {
    qt_poly = validate_polygon(std::move(verts));
  } catch (const Error&) {
    fail(Errc::grid_too_coarse, "extracted cell boundary is not a simple polygon");
  }

  // Vertex transfer: nearest Q_tau boundary point to each original mark,
  // ties resolved toward the smallest boundary location.
  std::array<BoundaryLocation, 4> new_marks{};
  for (int j = 0; j < 4; ++j) {
    const Point v = q.mark_point(j);
    double best = std::numeric_limits<double>::infinity();
    BoundaryLocation best_loc{0, 0.0};
    for (int e = 0; e < qt_poly.size(); ++e) {
      auto [a, b] = qt_poly.edge(e);
      const double t = closest_param(v, a, b);
      const double d = dist(v, lerp(a, b, t));
      const BoundaryLocation loc = qt_poly.normalized({e, t});
      const double slack = 1e-12 * (1.0 + d);
      if (d < best - slack || (d <= best + slack && loc < best_loc)) {
        best = d;
        best_loc = loc;
      }
    }
    new_marks[j] = best_loc;
  }

  RectifiedQuad out;
  try {
    out.quad = mark_quadrilateral(qt_poly, new_marks);
  } catch (const Error&) {
    fail(Errc::grid_too_coarse, "transferred marks collided or lost cyclic order");
  }
  out.s_used = s;
  out.origin_used = spec.origin;

  // Containment: sample the Q_tau boundary at step s/4.
  {
    const double eta = poly.tolerance();
    const double per = qt_poly.perimeter();
    const int samples = std::max(8, static_cast<int>(std::ceil(per / (s / 4.0))));
    for (int i = 0; i < samples; ++i) {
      const BoundaryLocation loc = qt_poly.location_at_arclength(per * i / samples);
      const Point p = qt_poly.point_at(loc);
      if (contains_point(poly, p) == Region::outside && distance_to_boundary(poly, p) > eta)
        fail(Errc::grid_too_coarse, "rectified boundary left the source polygon");
    }
  }

  // Side correspondence: each Q_tau side, sampled away from the transfer
  // neighborhoods of the marks, must track the matching Q side.
  {
    const double delta_check = 10.0 * s;
    const double limit = 3.0 * s + 2.0 * delta_check;
    std::array<Point, 4> mark_pts;
    for (int j = 0; j < 4; ++j) mark_pts[j] = q.mark_point(j);
    for (int sd = 0; sd < 4; ++sd) {
      const SideChain orig = side_chain(q, static_cast<SideId>(sd));
      const auto clipped = clip_outside_disks(orig.segs, mark_pts, 2.0 * delta_check);
      // A side swallowed by the clip disks is below the check's resolution.
      if (clipped.empty()) continue;
      auto dist_to_target = [&](Point p) {
        double bd = std::numeric_limits<double>::infinity();
        for (const auto& seg : clipped)
          bd = std::min(bd, point_segment_distance(p, seg.a, seg.b));
        return bd;
      };
      const Polyline tau_side = side_arc(out.quad, static_cast<SideId>(sd));
      const double len = tau_side.length();
      const int samples = std::max(4, static_cast<int>(std::ceil(len / (s / 2.0))));
      for (int i = 0; i <= samples; ++i) {
        const Point p = tau_side.point_at_arclength(len * i / samples);
        bool near_mark = false;
        for (const Point& mp : mark_pts)
          if (dist(p, mp) < 2.0 * delta_check) near_mark = true;
        if (near_mark) continue;
        if (dist_to_target(p) > limit)
          fail(Errc::grid_too_coarse, "side correspondence check failed");
      }
    }
  }

  out.s_a_q = geodesic_between_sides(q, SidePair::A).length;
  out.s_b_q = geodesic_between_sides(q, SidePair::B).length;
  out.s_a_t = geodesic_between_sides(out.quad, SidePair::A).length;
  out.s_b_t = geodesic_between_sides(out.quad, SidePair::B).length;
  out.dev_a = std::abs(out.s_a_t - out.s_a_q);
  out.dev_b = std::abs(out.s_b_t - out.s_b_q);
  const double ref = std::min(out.s_a_q, out.s_b_q);
  out.achieved_tau = std::max(out.dev_a, out.dev_b) / ref;
  out.ratio_q = out.s_a_q / out.s_b_q;
  out.ratio_qt = out.s_a_t / out.s_b_t;
  const double tau = out.achieved_tau;
  out.l_tau = (1.0 + tau) / (1.0 - tau) * out.ratio_q;
  out.ratio_within = tau < 1.0 &&
                     out.ratio_qt >= (1.0 - tau) / (1.0 + tau) * out.ratio_q - 1e-12 &&
                     out.ratio_qt <= out.l_tau + 1e-12;
  return out;
}

// Halving loop: start from s0 = (pole radius) / 8, jitter the origin by
// s/3 once per level on structural failures, stop at the first grid whose
// deviations meet the bound.
inline RectifiedQuad rectify_to_tolerance(const MarkedQuadrilateral& q, double tau) {
  if (!(tau > 0.0 && tau <= 0.5))
    fail(Errc::invalid_argument, "tau must lie in (0, 1/2]");
  const double pole_r = largest_inscribed_disk(q.polygon()).radius;
  const double s_a = geodesic_between_sides(q, SidePair::A).length;
  const double s_b = geodesic_between_sides(q, SidePair::B).length;
  const double budget = tau * std::min(s_a, s_b);

  double s = pole_r / 8.0;
  std::string last_error = "never attempted";
  for (int level = 0; level < 20; ++level, s /= 2.0) {
    for (const double jitter : {0.0, s / 3.0}) {
      const GridSpec spec{s, {jitter, jitter}};
      try {
        RectifiedQuad r = rectify(q, spec);
        if (r.dev_a <= budget && r.dev_b <= budget) {
          const double t = tau;
          r.l_tau = (1.0 + t) / (1.0 - t) * r.ratio_q;
          return r;
        }
        last_error = "deviations above budget at s = " + std::to_string(s);
        break;  // structural success but too coarse: halve instead of jitter
      } catch (const Error& e) {
        if (e.code() != Errc::grid_too_coarse) throw;
        last_error = e.what();
      }
    }
  }
  fail(Errc::iteration_cap, "rectification did not converge in 20 halvings: " + last_error);
}

}  // namespace quadlab
