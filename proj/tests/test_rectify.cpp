#include <catch2/catch_amalgamated.hpp>

#include <set>

#include <quadlab/rectify.hpp>

#include "common.hpp"

using namespace quadlab;
using qt::error_code;

namespace {

using CellSet = std::set<std::pair<long long, long long>>;

CellSet as_set(const std::vector<Cell>& cells) {
  CellSet out;
  for (const Cell& c : cells) out.insert({c.x, c.y});
  return out;
}

// Independent brute-force cover: distance-based closed contact plus a
// sampled open-passage / center-inside filter.
CellSet brute_cover(const SimplePolygon& poly, const GridSpec& spec) {
  const double s = spec.s;
  const Box bb = poly.bbox();
  const long long x0 = static_cast<long long>(std::floor((bb.lo.x - spec.origin.x) / s)) - 2;
  const long long x1 = static_cast<long long>(std::floor((bb.hi.x - spec.origin.x) / s)) + 2;
  const long long y0 = static_cast<long long>(std::floor((bb.lo.y - spec.origin.y) / s)) - 2;
  const long long y1 = static_cast<long long>(std::floor((bb.hi.y - spec.origin.y) / s)) + 2;
  CellSet out;
  for (long long cy = y0; cy <= y1; ++cy) {
    for (long long cx = x0; cx <= x1; ++cx) {
      const Point lo{spec.origin.x + cx * s, spec.origin.y + cy * s};
      const Point hi{lo.x + s, lo.y + s};
      const Point corners[4] = {lo, {hi.x, lo.y}, hi, {lo.x, hi.y}};
      bool touch = false, open_passage = false;
      for (int e = 0; e < poly.size() && !open_passage; ++e) {
        auto [a, b] = poly.edge(e);
        if (!touch) {
          for (int k = 0; k < 4 && !touch; ++k)
            if (segment_segment_distance(corners[k], corners[(k + 1) % 4], a, b) <= 1e-12)
              touch = true;
          auto in_box = [&](Point p) {
            return lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y;
          };
          if (in_box(a) || in_box(b)) touch = true;
        }
        const int samples = 4000;
        for (int i = 0; i <= samples && !open_passage; ++i) {
          const Point p = lerp(a, b, double(i) / samples);
          if (lo.x + 1e-12 < p.x && p.x < hi.x - 1e-12 && lo.y + 1e-12 < p.y &&
              p.y < hi.y - 1e-12)
            open_passage = true;
        }
      }
      if (!touch) continue;
      const Point center{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
      if (!open_passage && contains_point(poly, center) != Region::inside) continue;
      out.insert({cx, cy});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("grid_cover of the unit square, s = 1/4") {
  const auto sq = qt::unit_square().polygon();
  const GridSpec spec{0.25, {0, 0}};
  const auto cells = grid_cover(sq, spec);
  REQUIRE(cells.size() == 12);  // the 4x4 interior ring
  REQUIRE(as_set(cells) == brute_cover(sq, spec));
}

TEST_CASE("grid_cover of the unit square, s = 1/2: every cell touches") {
  const auto sq = qt::unit_square().polygon();
  const GridSpec spec{0.5, {0, 0}};
  const auto cells = grid_cover(sq, spec);
  REQUIRE(cells.size() == 4);
  REQUIRE(as_set(cells) == brute_cover(sq, spec));
}

TEST_CASE("grid_cover of the diamond is symmetric and matches brute force") {
  const auto dia = qt::diamond_quad().polygon();
  const GridSpec spec{0.25, {0, 0}};
  const auto cells = grid_cover(dia, spec);
  const CellSet set = as_set(cells);
  REQUIRE(set == brute_cover(dia, spec));
  // Diamond symmetries about x=1 and y=1 map cell (x,y) -> (7-x, y) etc.
  // (cells span indices 0..7 across [0,2]).
  for (const auto& [x, y] : set) {
    REQUIRE(set.count({7 - x, y}) == 1);
    REQUIRE(set.count({x, 7 - y}) == 1);
    REQUIRE(set.count({y, x}) == 1);
  }
}

TEST_CASE("rectify the 2x1 rectangle on an offset grid") {
  const auto q = qt::rect_quad();
  const GridSpec spec{1.0 / 8, {1.0 / 16, 1.0 / 16}};
  const auto r = rectify(q, spec);
  // One ring of cells in from each wall keeps Q_tau a rectangle.
  REQUIRE(r.quad.polygon().size() == 4);
  REQUIRE(r.s_a_q == Catch::Approx(1.0));
  REQUIRE(r.s_b_q == Catch::Approx(2.0));
  REQUIRE(r.dev_a <= 4.0 * spec.s + 1e-12);
  REQUIRE(r.dev_b <= 4.0 * spec.s + 1e-12);
  REQUIRE(r.dev_a <= 0.5 * std::min(r.s_a_q, r.s_b_q));
}

TEST_CASE("rectify the diamond: staircase contained in Q") {
  const auto q = qt::diamond_quad();
  const GridSpec spec{1.0 / 32, {0, 0}};
  const auto r = rectify(q, spec);
  REQUIRE(r.s_a_q == Catch::Approx(std::sqrt(2.0)));
  REQUIRE(r.dev_a <= 0.1 * std::min(r.s_a_q, r.s_b_q));
  REQUIRE(r.dev_b <= 0.1 * std::min(r.s_a_q, r.s_b_q));

  // Rectilinear on the grid and strictly inside the diamond.
  const auto& pt = r.quad.polygon();
  for (int e = 0; e < pt.size(); ++e) {
    auto [a, b] = pt.edge(e);
    REQUIRE((a.x == b.x || a.y == b.y));
    const double kx = (a.x - spec.origin.x) / spec.s;
    const double ky = (a.y - spec.origin.y) / spec.s;
    REQUIRE(kx == Catch::Approx(std::round(kx)).margin(1e-9));
    REQUIRE(ky == Catch::Approx(std::round(ky)).margin(1e-9));
  }
  for (const Point& v : pt.vertices())
    REQUIRE(contains_point(q.polygon(), v) != Region::outside);
}

TEST_CASE("rectify a quadrilateral already on the grid: one-ring shrink") {
  const auto q = qt::rect_quad();
  const GridSpec spec{0.25, {0, 0}};
  const auto r = rectify(q, spec);
  const auto& v = r.quad.polygon().vertices();
  REQUIRE(v.size() == 4);
  const Box bb = r.quad.polygon().bbox();
  REQUIRE(bb.lo == Point{0.25, 0.25});
  REQUIRE(bb.hi == Point{1.75, 0.75});
}

TEST_CASE("rectify_to_tolerance on the rectangle converges within two levels") {
  const auto r = rectify_to_tolerance(qt::rect_quad(), 0.1);
  REQUIRE(r.achieved_tau <= 0.1);
  const double s0 = largest_inscribed_disk(qt::rect_quad().polygon()).radius / 8.0;
  REQUIRE(r.s_used >= s0 / 2.0 - 1e-12);
}

TEST_CASE("rectify_to_tolerance on the diamond at tau = 0.05") {
  const auto r = rectify_to_tolerance(qt::diamond_quad(), 0.05);
  REQUIRE(r.achieved_tau <= 0.05);
  REQUIRE(r.ratio_within);
}

TEST_CASE("rectify_to_tolerance rejects tau outside (0, 1/2]") {
  REQUIRE(error_code([] { rectify_to_tolerance(qt::rect_quad(), 0.6); }) ==
          Errc::invalid_argument);
  REQUIRE(error_code([] { rectify_to_tolerance(qt::rect_quad(), 0.0); }) ==
          Errc::invalid_argument);
}

TEST_CASE("rectification invariants on mixed fixtures") {
  for (const auto& q : {qt::rect_quad(), qt::l_quad(), qt::u_quad(), qt::diamond_quad()}) {
    const auto r = rectify_to_tolerance(q, 0.1);
    // Deviation bounds at the returned grid.
    const double budget = 0.1 * std::min(r.s_a_q, r.s_b_q);
    REQUIRE(r.dev_a <= budget + 1e-12);
    REQUIRE(r.dev_b <= budget + 1e-12);
    // Ratio transfer.
    const double tau = 0.1;
    REQUIRE(r.ratio_qt >= (1 - tau) / (1 + tau) * r.ratio_q - 1e-9);
    REQUIRE(r.ratio_qt <= (1 + tau) / (1 - tau) * r.ratio_q + 1e-9);
    // Containment, sampled on top of rectify's internal check.
    const auto& pt = r.quad.polygon();
    const double per = pt.perimeter();
    for (int i = 0; i < 64; ++i) {
      const Point p = pt.point_at(pt.location_at_arclength(per * i / 64.0));
      const bool ok = contains_point(q.polygon(), p) != Region::outside ||
                      distance_to_boundary(q.polygon(), p) <= q.polygon().tolerance();
      REQUIRE(ok);
    }
  }
}

TEST_CASE("refinement does not grow the deviations (regression corpus)") {
  for (const auto& q : {qt::rect_quad(), qt::diamond_quad()}) {
    const double s0 = largest_inscribed_disk(q.polygon()).radius / 8.0;
    const auto coarse = rectify(q, {s0, {s0 / 16, s0 / 16}});
    const auto fine = rectify(q, {s0 / 2, {s0 / 16, s0 / 16}});
    REQUIRE(fine.dev_a <= coarse.dev_a * (1.0 + 1e-6) + 1e-12);
    REQUIRE(fine.dev_b <= coarse.dev_b * (1.0 + 1e-6) + 1e-12);
  }
}
