// Shared fixtures for the test suites: the hand-built instances used across
// modules (rectangles, L / U polygons, diamond) and a few helpers.

#pragma once

#include <array>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include <quadlab/geometry.hpp>

namespace qt {

using namespace quadlab;

// Axis rectangle [0,w] x [0,h] marked at the corners: v1=(0,0), v2=(w,0),
// v3=(w,h), v4=(0,h). a-sides are bottom/top, so s_a = h and s_b = w.
inline MarkedQuadrilateral rect_quad(double w = 2.0, double h = 1.0) {
  auto poly = validate_polygon({{0, 0}, {w, 0}, {w, h}, {0, h}});
  return mark_quadrilateral(std::move(poly),
                            {BoundaryLocation{0, 0}, BoundaryLocation{1, 0},
                             BoundaryLocation{2, 0}, BoundaryLocation{3, 0}});
}

inline MarkedQuadrilateral unit_square() { return rect_quad(1.0, 1.0); }

// L-polygon (0,0),(2,0),(2,1),(1,1),(1,2),(0,2), marks at (0,0),(2,0),(1,2),(0,2).
inline SimplePolygon l_polygon() {
  return validate_polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
}
inline MarkedQuadrilateral l_quad() {
  return mark_quadrilateral(l_polygon(),
                            {BoundaryLocation{0, 0}, BoundaryLocation{1, 0},
                             BoundaryLocation{4, 0}, BoundaryLocation{5, 0}});
}

// U-polygon with a slot; marks v1=(1,2), v2=(2,2), v3=(2,1.5), v4=(1,1.5).
// Pair B joins the two slot-wall stubs; its geodesic has length 3.
inline MarkedQuadrilateral u_quad() {
  auto poly = validate_polygon(
      {{0, 0}, {3, 0}, {3, 2}, {2, 2}, {2, 0.5}, {1, 0.5}, {1, 2}, {0, 2}});
  // edges: 0:(0,0)-(3,0) 1:(3,0)-(3,2) 2:(3,2)-(2,2) 3:(2,2)-(2,0.5)
  //        4:(2,0.5)-(1,0.5) 5:(1,0.5)-(1,2) 6:(1,2)-(0,2) 7:(0,2)-(0,0)
  return mark_quadrilateral(std::move(poly),
                            {BoundaryLocation{6, 0}, BoundaryLocation{3, 0},
                             BoundaryLocation{3, 1.0 / 3.0}, BoundaryLocation{5, 2.0 / 3.0}});
}

// Rectangle [0,2] x [0,1] marked in the interiors of the horizontal edges,
// so the pair-A geodesic runs far from the vertical walls.
inline MarkedQuadrilateral rect_midmark_quad() {
  auto poly = validate_polygon({{0, 0}, {2, 0}, {2, 1}, {0, 1}});
  return mark_quadrilateral(std::move(poly),
                            {BoundaryLocation{0, 0.125}, BoundaryLocation{0, 0.875},
                             BoundaryLocation{2, 0.125}, BoundaryLocation{2, 0.875}});
}

// Diamond |x-1| + |y-1| <= 1 with marks at the four polygon corners.
inline MarkedQuadrilateral diamond_quad() {
  auto poly = validate_polygon({{1, 0}, {2, 1}, {1, 2}, {0, 1}});
  return mark_quadrilateral(std::move(poly),
                            {BoundaryLocation{0, 0}, BoundaryLocation{1, 0},
                             BoundaryLocation{2, 0}, BoundaryLocation{3, 0}});
}

// Diamond marked at edge midpoints; the pair-A geodesic ends at two marks.
inline MarkedQuadrilateral diamond_midmark_quad() {
  auto poly = validate_polygon({{1, 0}, {2, 1}, {1, 2}, {0, 1}});
  return mark_quadrilateral(std::move(poly),
                            {BoundaryLocation{3, 0.5}, BoundaryLocation{0, 0.5},
                             BoundaryLocation{1, 0.5}, BoundaryLocation{2, 0.5}});
}

inline Errc error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::logic_error("expected a quadlab::Error");
}

}  // namespace qt
