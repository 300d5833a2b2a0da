// Brute-force geodesic oracle: 8-neighbor Dijkstra over a dense interior
// grid. Independent of the visibility-graph solver; converges to the true
// geodesic length from above as h -> 0, within the 8-neighbor metric
// distortion factor 1/cos(pi/8) <= 1.083.
//
// corrected_length additionally pulls the grid path taut (greedy shortcuts
// validated by the segment-in-polygon primitive), which removes most of the
// metric distortion while staying independent of the graph solver.

#pragma once

#include <numbers>
#include <queue>
#include <vector>

#include "geodesic.hpp"

namespace quadlab {

struct OracleResult {
  double length = 0.0;            // raw grid metric value
  double corrected_length = 0.0;  // taut-smoothed path length
  Polyline corrected_path;
};

inline OracleResult geodesic_oracle(const MarkedQuadrilateral& q, SidePair pair, double h) {
  if (!(h > 0.0)) fail(Errc::invalid_argument, "grid step must be positive");
  const SimplePolygon& poly = q.polygon();
  const EdgeGrid grid(poly);
  const auto [s1, s2] = sides_of(pair);
  const Polyline src = side_arc(q, s1);
  const Polyline tgt = side_arc(q, s2);

  const Box bb = poly.bbox();
  const int nx = static_cast<int>(std::floor(bb.width() / h)) + 2;
  const int ny = static_cast<int>(std::floor(bb.height() / h)) + 2;
  const int N = nx * ny;
  auto node_pt = [&](int idx) {
    return Point{bb.lo.x + (idx % nx) * h, bb.lo.y + (idx / nx) * h};
  };

  std::vector<char> active(N, 0);
  for (int i = 0; i < N; ++i)
    active[i] = contains_point(poly, node_pt(i)) != Region::outside;

  auto polyline_distance = [](const Polyline& pl, Point p) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < pl.pts.size(); ++i)
      best = std::min(best, point_segment_distance(p, pl.pts[i], pl.pts[i + 1]));
    return best;
  };

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dd(N, inf), tgt_d(N, inf);
  std::vector<int> parent(N, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  int sources = 0, targets = 0;
  const double slack = 1e-12 * (1.0 + h);
  for (int i = 0; i < N; ++i) {
    if (!active[i]) continue;
    const Point p = node_pt(i);
    const double ds = polyline_distance(src, p);
    if (ds <= h + slack) {
      dd[i] = ds;
      heap.push({ds, i});
      ++sources;
    }
    const double dt = polyline_distance(tgt, p);
    if (dt <= h + slack) {
      tgt_d[i] = dt;
      ++targets;
    }
  }
  if (sources == 0 || targets == 0)
    fail(Errc::grid_too_coarse, "no grid nodes within h of a side");

  const double eta = poly.tolerance();
  auto step_ok = [&](int i, int j) {
    const Point a = node_pt(i), b = node_pt(j);
    bool crossed = false;
    grid.for_candidates(a, b, [&](int e) {
      if (crossed) return;
      auto [p, q2] = poly.edge(e);
      if (properly_cross(a, b, p, q2)) crossed = true;
    });
    if (crossed) return false;
    const Point m = lerp(a, b, 0.5);
    return !(contains_point(poly, m) == Region::outside &&
             distance_to_boundary(poly, m) > eta);
  };

  const int dxs[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  const int dys[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  while (!heap.empty()) {
    auto [d, i] = heap.top();
    heap.pop();
    if (d > dd[i]) continue;
    const int ix = i % nx, iy = i / nx;
    for (int k = 0; k < 8; ++k) {
      const int jx = ix + dxs[k], jy = iy + dys[k];
      if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
      const int j = jy * nx + jx;
      if (!active[j]) continue;
      const double w = (k < 4) ? h : h * std::numbers::sqrt2;
      if (d + w >= dd[j]) continue;
      if (!step_ok(i, j)) continue;
      dd[j] = d + w;
      parent[j] = i;
      heap.push({dd[j], j});
    }
  }

  int best_node = -1;
  double best = inf;
  for (int i = 0; i < N; ++i) {
    if (tgt_d[i] >= inf || dd[i] >= inf) continue;
    if (dd[i] + tgt_d[i] < best) {
      best = dd[i] + tgt_d[i];
      best_node = i;
    }
  }
  if (best_node < 0) fail(Errc::grid_too_coarse, "grid sides are disconnected");

  OracleResult res;
  res.length = best;

  // Reconstruct, extend exactly to the sides, and pull taut.
  std::vector<Point> pts;
  for (int u = best_node; u >= 0; u = parent[u]) pts.push_back(node_pt(u));
  std::reverse(pts.begin(), pts.end());
  auto closest_on = [&](const Polyline& pl, Point p) {
    double bd = inf;
    Point bp = pl.pts.front();
    for (size_t i = 0; i + 1 < pl.pts.size(); ++i) {
      const double t = closest_param(p, pl.pts[i], pl.pts[i + 1]);
      const Point c = lerp(pl.pts[i], pl.pts[i + 1], t);
      if (dist(p, c) < bd) {
        bd = dist(p, c);
        bp = c;
      }
    }
    return bp;
  };
  pts.insert(pts.begin(), closest_on(src, pts.front()));
  pts.push_back(closest_on(tgt, pts.back()));

  auto pull_taut = [&](const std::vector<Point>& chain) {
    std::vector<Point> out{chain.front()};
    size_t i = 0;
    while (i + 1 < chain.size()) {
      size_t j = i + 1;
      while (j + 1 < chain.size() &&
             detail::segment_in_polygon(poly, grid, chain[i], chain[j + 1]))
        ++j;
      out.push_back(chain[j]);
      i = j;
    }
    return out;
  };
  // Grid-node bends sit off the true corners; re-basing each bend on the
  // best polygon vertex removes the residual metric distortion. The tauted
  // chains are short, so trying every vertex is cheap.
  auto snap_bends = [&](std::vector<Point> chain) {
    for (size_t k = 1; k + 1 < chain.size(); ++k) {
      Point best = chain[k];
      double best_len = dist(chain[k - 1], chain[k]) + dist(chain[k], chain[k + 1]);
      for (int v = 0; v < poly.size(); ++v) {
        const Point pv = poly.vertex(v);
        const double len = dist(chain[k - 1], pv) + dist(pv, chain[k + 1]);
        if (len >= best_len - 1e-15) continue;
        if (!detail::segment_in_polygon(poly, grid, chain[k - 1], pv)) continue;
        if (!detail::segment_in_polygon(poly, grid, pv, chain[k + 1])) continue;
        best = pv;
        best_len = len;
      }
      chain[k] = best;
    }
    return chain;
  };

  std::vector<Point> chain = pull_taut(pts);
  for (int round = 0; round < 6; ++round) {
    const double before = Polyline{chain}.length();
    chain = pull_taut(snap_bends(chain));
    if (Polyline{chain}.length() >= before - 1e-14) break;
  }
  // The seeded endpoints are the feet of grid nodes, not optimal attachment
  // points; alternate re-projection onto the sides until stable.
  for (int round = 0; round < 30 && chain.size() >= 2; ++round) {
    bool changed = false;
    const Point fc = closest_on(src, chain[1]);
    if (dist(fc, chain[1]) + 1e-14 < dist(chain.front(), chain[1]) &&
        detail::segment_in_polygon(poly, grid, fc, chain[1])) {
      chain.front() = fc;
      changed = true;
    }
    const Point bc = closest_on(tgt, chain[chain.size() - 2]);
    if (dist(bc, chain[chain.size() - 2]) + 1e-14 <
            dist(chain.back(), chain[chain.size() - 2]) &&
        detail::segment_in_polygon(poly, grid, bc, chain[chain.size() - 2])) {
      chain.back() = bc;
      changed = true;
    }
    chain = pull_taut(chain);
    if (!changed) break;
  }
  Polyline taut;
  taut.pts = chain;
  res.corrected_path = taut;
  res.corrected_length = taut.length();
  return res;
}

}  // namespace quadlab
