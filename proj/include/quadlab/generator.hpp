// Instance generators: seeded random rectilinear quadrilaterals (simply
// connected grid blobs) and the pinch family with two tongues almost
// meeting in the middle.
//
// All randomness flows through std::mt19937_64 with explicit reductions, so
// identical seeds produce identical instances on every platform.

#pragma once

#include <random>

#include "geodesic.hpp"
#include "rectify.hpp"

namespace quadlab {

struct GeneratorParams {
  std::uint64_t seed = 0;
  int grid = 16;         // blob grows on a grid x grid cell board
  int target_cells = 60;
};

namespace detail {

inline std::uint64_t rng_u64(std::mt19937_64& rng) { return rng(); }
inline std::size_t rng_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng_u64(rng) % n);
}
inline double rng_unit(std::mt19937_64& rng) {
  return (rng_u64(rng) >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Grows a 4-connected, simply connected cell blob and extracts its boundary;
// marks go to boundary lattice points at snapped cyclic arclength quantiles
// [q, q+1/4, q+1/2, q+3/4] of a random phase q.
inline MarkedQuadrilateral generate_random_rectilinear(const GeneratorParams& p) {
  if (p.grid < 4 || p.target_cells < 4)
    fail(Errc::invalid_params, "grid and target_cells must be at least 4");
  std::mt19937_64 rng(p.seed);
  const int n = p.grid;

  std::unordered_set<std::uint64_t> blob;
  auto key = [](int x, int y) { return detail::pack_cell(x, y); };
  blob.insert(key(n / 2, n / 2));

  // The complement (within a one-cell padding) must stay 4-connected, which
  // keeps the blob simply connected.
  auto complement_connected = [&](const std::unordered_set<std::uint64_t>& cells) {
    std::vector<std::uint64_t> stack{key(-1, -1)};
    std::unordered_set<std::uint64_t> seen{key(-1, -1)};
    std::size_t complement_size = 0;
    for (int y = -1; y <= n; ++y)
      for (int x = -1; x <= n; ++x)
        if (!cells.count(key(x, y))) ++complement_size;
    while (!stack.empty()) {
      const Cell c = detail::unpack_cell(stack.back());
      stack.pop_back();
      const Cell nbrs[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
      for (const Cell& nb : nbrs) {
        if (nb.x < -1 || nb.x > n || nb.y < -1 || nb.y > n) continue;
        const std::uint64_t k = key(static_cast<int>(nb.x), static_cast<int>(nb.y));
        if (cells.count(k) || seen.count(k)) continue;
        seen.insert(k);
        stack.push_back(k);
      }
    }
    return seen.size() == complement_size;
  };

  const int max_draws = 200 * p.target_cells;
  for (int draw = 0; draw < max_draws && static_cast<int>(blob.size()) < p.target_cells;
       ++draw) {
    // Candidates: free in-board cells 4-adjacent to the blob, in row order.
    std::vector<Cell> candidates;
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        if (blob.count(key(x, y))) continue;
        const bool adj = blob.count(key(x + 1, y)) || blob.count(key(x - 1, y)) ||
                         blob.count(key(x, y + 1)) || blob.count(key(x, y - 1));
        if (adj) candidates.push_back({x, y});
      }
    }
    if (candidates.empty()) break;
    const Cell c = candidates[detail::rng_index(rng, candidates.size())];
    const std::uint64_t k = key(static_cast<int>(c.x), static_cast<int>(c.y));
    blob.insert(k);
    if (!complement_connected(blob)) blob.erase(k);
  }
  if (blob.size() < 8) fail(Errc::generation_failed, "blob degenerated below 8 cells");

  std::vector<Point> verts;
  for (const Cell& c : detail::trace_component_boundary(blob))
    verts.push_back({static_cast<double>(c.x), static_cast<double>(c.y)});
  SimplePolygon poly = validate_polygon(std::move(verts));

  // Marks at snapped arclength quantiles; integer arclengths land on
  // lattice boundary points because every edge has integer length.
  const double per = poly.perimeter();
  const double phase = detail::rng_unit(rng);
  std::array<long long, 4> pos{};
  for (int j = 0; j < 4; ++j) {
    pos[j] = static_cast<long long>(std::llround(std::fmod(phase + 0.25 * j, 1.0) * per)) %
             static_cast<long long>(per);
  }
  // Resolve snap collisions by stepping forward.
  for (int pass = 0; pass < 8; ++pass) {
    bool ok = true;
    for (int i = 0; i < 4 && ok; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (pos[i] == pos[j]) {
          pos[j] = (pos[j] + 1) % static_cast<long long>(per);
          ok = false;
          break;
        }
    if (ok) break;
  }
  std::array<BoundaryLocation, 4> marks{};
  for (int j = 0; j < 4; ++j)
    marks[j] = poly.location_at_arclength(static_cast<double>(pos[j]));
  // The quantiles walk the boundary in order; rotate so that marks ascend
  // from marks[0].
  try {
    return mark_quadrilateral(poly, marks);
  } catch (const Error&) {
    fail(Errc::generation_failed, "mark placement degenerated");
  }
}

// ---------------------------------------------------------------------------
// Pinch family

struct PinchParams {
  double t = 1.0;           // gap width between the tongue tips
  double W = 100.0;         // square side
  double height = 3.0;      // tongue height above the bottom wall
  double thickness = 0.1;   // tongue thickness
  double delta_test = 0.002;
};

struct PinchInstance {
  MarkedQuadrilateral quad;
  double s_a = 0.0;          // measured: W
  double s_b = 0.0;          // measured: t
  double pinch_height = 0.0;
  PinchParams params;
};

// Square [0,W]^2 marked at its corners, with two rectangular tongues carved
// out: one attached to the left wall (surface on side B2) and one to the
// right wall (surface on B1), leaving a gap of width t between their tips.
inline PinchInstance pinch_family(const PinchParams& p) {
  const double W = p.W, h = p.height, w = p.thickness, t = p.t;
  if (!(t > 0.0) || !(t <= 1.0)) fail(Errc::invalid_params, "need 0 < t <= 1");
  if (!(w > 0.0) || !(h > 0.0) || !(h + w < W))
    fail(Errc::invalid_params, "tongue does not fit the square");
  if (!(W / 2.0 - t / 2.0 > 0.0)) fail(Errc::invalid_params, "gap wider than the square");

  const double xr = W / 2.0 + t / 2.0;  // right tongue tip
  const double xl = W / 2.0 - t / 2.0;  // left tongue tip
  SimplePolygon poly = validate_polygon({{0, 0},
                                         {W, 0},
                                         {W, h},
                                         {xr, h},
                                         {xr, h + w},
                                         {W, h + w},
                                         {W, W},
                                         {0, W},
                                         {0, h + w},
                                         {xl, h + w},
                                         {xl, h},
                                         {0, h}});
  PinchInstance inst;
  inst.quad = mark_quadrilateral(poly, {BoundaryLocation{0, 0}, BoundaryLocation{1, 0},
                                        BoundaryLocation{6, 0}, BoundaryLocation{7, 0}});
  inst.s_a = geodesic_between_sides(inst.quad, SidePair::A).length;
  inst.s_b = geodesic_between_sides(inst.quad, SidePair::B).length;
  inst.pinch_height = h;
  inst.params = p;
  return inst;
}

// The disk condition along the minimal a-arc: for r = delta * max(s_a, s_b)
// and every sampled w0 on C_a at arclength >= 16 * (10 r) from both ends,
// some disk of radius r within D(w0, 10 r) lies in Q.
struct PinchDiskCheck {
  bool ok = false;
  int samples = 0;
  double min_clearance = 0.0;  // worst distance_to_boundary of a chosen center
};

inline PinchDiskCheck pinch_disk_condition(const MarkedQuadrilateral& q, double delta,
                                           int n_samples = 10) {
  const double s_a = geodesic_between_sides(q, SidePair::A).length;
  const double s_b = geodesic_between_sides(q, SidePair::B).length;
  const double r = delta * std::max(s_a, s_b);
  const GeodesicResult g = geodesic_between_sides(q, SidePair::A);
  const double margin = 16.0 * 10.0 * r;
  PinchDiskCheck out;
  out.ok = true;
  out.min_clearance = std::numeric_limits<double>::infinity();
  if (g.length <= 2.0 * margin) {
    out.ok = false;
    return out;
  }
  for (int i = 0; i < n_samples; ++i) {
    const double s = margin + (g.length - 2.0 * margin) * (i + 0.5) / n_samples;
    const Point w0 = g.path.point_at_arclength(s);
    // Search within D(w0, 10 r) for a valid center; w0 itself first.
    bool found = false;
    for (int ring = 0; ring <= 8 && !found; ++ring) {
      const double rho = ring * r;
      if (rho > 9.0 * r) break;
      const int spokes = ring == 0 ? 1 : 8 * ring;
      for (int k = 0; k < spokes; ++k) {
        const double a = 2.0 * std::numbers::pi * k / spokes;
        const Point c{w0.x + rho * std::cos(a), w0.y + rho * std::sin(a)};
        if (contains_point(q.polygon(), c) != Region::inside) continue;
        const double clearance = distance_to_boundary(q.polygon(), c);
        if (clearance >= r) {
          out.min_clearance = std::min(out.min_clearance, clearance);
          found = true;
          break;
        }
      }
    }
    ++out.samples;
    if (!found) {
      out.ok = false;
      return out;
    }
  }
  return out;
}

}  // namespace quadlab
