// Largest inscribed disk / pole of inaccessibility.
//
// Two mechanisms combined:
//  * a priority-queue cell search over the signed distance field (the
//    mapbox/polylabel scheme) with a tight terminal precision, and
//  * exact candidate enumeration over medial-axis junctions: points
//    equidistant from three sites, where a site is a polygon edge or a
//    reflex vertex. The winning candidate is re-evaluated with the exact
//    distance query, so spurious junction solutions are harmless.

#pragma once

#include <numbers>
#include <queue>
#include <vector>

#include "geometry.hpp"

namespace quadlab {

struct DiskCandidate {
  Point center;
  double radius = 0.0;
  enum class Provenance { tangent_construction, seven_arc, global_search } provenance =
      Provenance::global_search;
};

namespace detail {

inline double signed_distance(const SimplePolygon& poly, Point p) {
  const double d = distance_to_boundary(poly, p);
  return contains_point(poly, p) == Region::outside ? -d : d;
}

struct PoleCell {
  Point c;
  double half = 0.0;
  double d = 0.0;
  double potential = 0.0;
  PoleCell(const SimplePolygon& poly, Point center, double h)
      : c(center), half(h), d(signed_distance(poly, center)),
        potential(d + h * std::numbers::sqrt2) {}
  friend bool operator<(const PoleCell& a, const PoleCell& b) {
    return a.potential < b.potential;
  }
};

inline DiskCandidate pole_search(const SimplePolygon& poly, double precision) {
  const Box bb = poly.bbox();
  const double cell = std::min(bb.width(), bb.height());
  std::priority_queue<PoleCell> queue;
  const double h0 = cell / 2.0;
  for (double x = bb.lo.x; x < bb.hi.x; x += cell)
    for (double y = bb.lo.y; y < bb.hi.y; y += cell)
      queue.push(PoleCell(poly, {x + h0, y + h0}, h0));

  PoleCell best(poly, {0.5 * (bb.lo.x + bb.hi.x), 0.5 * (bb.lo.y + bb.hi.y)}, 0.0);
  while (!queue.empty()) {
    const PoleCell top = queue.top();
    queue.pop();
    if (top.d > best.d) best = top;
    if (top.potential - best.d <= precision) continue;
    const double h = top.half / 2.0;
    queue.push(PoleCell(poly, {top.c.x - h, top.c.y - h}, h));
    queue.push(PoleCell(poly, {top.c.x + h, top.c.y - h}, h));
    queue.push(PoleCell(poly, {top.c.x - h, top.c.y + h}, h));
    queue.push(PoleCell(poly, {top.c.x + h, top.c.y + h}, h));
  }
  return {best.c, std::max(best.d, 0.0), DiskCandidate::Provenance::global_search};
}

// A site of the medial axis: the supporting line of an edge (with inward
// unit normal) or a reflex vertex.
struct Site {
  bool is_vertex = false;
  Point a;       // edge start or the vertex itself
  Point normal;  // inward unit normal (edges only)
};

inline void junction_candidates(const SimplePolygon& poly, std::vector<Point>& out) {
  std::vector<Site> sites;
  for (int i = 0; i < poly.size(); ++i) {
    auto [a, b] = poly.edge(i);
    const Point d = b - a;
    const double len = norm(d);
    if (len <= 0.0) continue;
    sites.push_back({false, a, Point{-d.y / len, d.x / len}});
  }
  for (int i = 0; i < poly.size(); ++i)
    if (poly.reflex(i)) sites.push_back({true, poly.vertex(i), {}});
  const int m = static_cast<int>(sites.size());
  if (m > 400) return;  // junction sweep reserved for moderate inputs

  auto sdist = [](const Site& s, Point p) {
    return dot(s.normal, p - s.a);
  };
  // Intersect the locus {s1(p) == s2(p)} (a line) with the equal-distance
  // condition against a third site along it.
  auto bisector_line = [&](const Site& e1, const Site& e2, Point& p0, Point& dir) {
    const Point n = e1.normal - e2.normal;
    const double c = dot(e1.normal, e1.a) - dot(e2.normal, e2.a);
    const double nn = norm2(n);
    if (nn < 1e-18) return false;
    p0 = (c / nn) * n;
    dir = {-n.y / std::sqrt(nn), n.x / std::sqrt(nn)};
    return true;
  };
  auto solve_quadratic = [](double A, double B, double C, double roots[2]) {
    if (std::abs(A) < 1e-14) {
      if (std::abs(B) < 1e-14) return 0;
      roots[0] = -C / B;
      return 1;
    }
    const double disc = B * B - 4 * A * C;
    if (disc < 0) return 0;
    const double sq = std::sqrt(disc);
    roots[0] = (-B - sq) / (2 * A);
    roots[1] = (-B + sq) / (2 * A);
    return 2;
  };

  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      for (int k = j + 1; k < m; ++k) {
        const Site* e[3];
        const Site* v[3];
        int ne = 0, nv = 0;
        for (const Site* s : {&sites[i], &sites[j], &sites[k]})
          (s->is_vertex ? v[nv++] : e[ne++]) = s;
        if (ne == 3) {
          // d(e0) = d(e1) = d(e2): 2x2 linear system.
          const Point n1 = e[0]->normal - e[1]->normal;
          const Point n2 = e[0]->normal - e[2]->normal;
          const double c1 = dot(e[0]->normal, e[0]->a) - dot(e[1]->normal, e[1]->a);
          const double c2 = dot(e[0]->normal, e[0]->a) - dot(e[2]->normal, e[2]->a);
          const double det = n1.x * n2.y - n1.y * n2.x;
          if (std::abs(det) < 1e-14) continue;
          out.push_back({(c1 * n2.y - c2 * n1.y) / det, (n1.x * c2 - n2.x * c1) / det});
        } else if (ne == 2) {
          Point p0, dir;
          if (!bisector_line(*e[0], *e[1], p0, dir)) continue;
          const Point w = p0 - v[0]->a;
          const double s0 = sdist(*e[0], p0);
          const double nd = dot(e[0]->normal, dir);
          double roots[2];
          const int nr = solve_quadratic(1.0 - nd * nd,
                                         2.0 * (dot(w, dir) - s0 * nd),
                                         norm2(w) - s0 * s0, roots);
          for (int r = 0; r < nr; ++r) out.push_back(p0 + roots[r] * dir);
        } else if (ne == 1) {
          // Perpendicular bisector of the two vertices against the edge.
          const Point mid = 0.5 * (v[0]->a + v[1]->a);
          const Point dv = v[1]->a - v[0]->a;
          const double len = norm(dv);
          if (len <= 0.0) continue;
          const Point dir{-dv.y / len, dv.x / len};
          const Point w = mid - v[0]->a;
          const double s0 = sdist(*e[0], mid);
          const double nd = dot(e[0]->normal, dir);
          double roots[2];
          const int nr = solve_quadratic(1.0 - nd * nd,
                                         2.0 * (dot(w, dir) - s0 * nd),
                                         norm2(w) - s0 * s0, roots);
          for (int r = 0; r < nr; ++r) out.push_back(mid + roots[r] * dir);
        } else {
          // Circumcenter of three reflex vertices.
          const Point A = v[0]->a, B = v[1]->a, Cp = v[2]->a;
          const double d = 2.0 * (A.x * (B.y - Cp.y) + B.x * (Cp.y - A.y) + Cp.x * (A.y - B.y));
          if (std::abs(d) < 1e-14) continue;
          const double ux = (norm2(A) * (B.y - Cp.y) + norm2(B) * (Cp.y - A.y) +
                             norm2(Cp) * (A.y - B.y)) / d;
          const double uy = (norm2(A) * (Cp.x - B.x) + norm2(B) * (A.x - Cp.x) +
                             norm2(Cp) * (B.x - A.x)) / d;
          out.push_back({ux, uy});
        }
      }
    }
  }
}

}  // namespace detail

inline DiskCandidate largest_inscribed_disk(const SimplePolygon& poly) {
  // Ridges of equal maxima make the cell search explore O(ridge/precision)
  // cells, so it runs at seed precision; the junction candidates below
  // recover the exact optimum.
  const double precision = std::max(1e-4 * poly.bbox().diagonal(), 1e-14);
  DiskCandidate best = detail::pole_search(poly, precision);
  std::vector<Point> candidates;
  detail::junction_candidates(poly, candidates);
  for (const Point& p : candidates) {
    if (!finite(p)) continue;
    if (contains_point(poly, p) != Region::inside) continue;
    const double r = distance_to_boundary(poly, p);
    if (r > best.radius) best = {p, r, DiskCandidate::Provenance::global_search};
  }
  return best;
}

inline DiskCandidate largest_inscribed_disk(const MarkedQuadrilateral& q) {
  return largest_inscribed_disk(q.polygon());
}

// Interior point maximizing the distance to the boundary.
inline Point pole_of_inaccessibility(const SimplePolygon& poly) {
  return largest_inscribed_disk(poly).center;
}

}  // namespace quadlab
