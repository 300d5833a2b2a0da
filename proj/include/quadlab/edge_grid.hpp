// Uniform spatial bins over polygon edges, for segment-vs-boundary queries.

#pragma once

#include <cmath>
#include <vector>

#include "geometry.hpp"

namespace quadlab {

class EdgeGrid {
 public:
  explicit EdgeGrid(const SimplePolygon& poly, int resolution = 64) : poly_(&poly) {
    const Box bb = poly.bbox();
    lo_ = bb.lo;
    cell_ = std::max(bb.width(), bb.height()) / resolution;
    if (cell_ <= 0.0) cell_ = 1.0;
    nx_ = static_cast<int>(std::floor(bb.width() / cell_)) + 1;
    ny_ = static_cast<int>(std::floor(bb.height() / cell_)) + 1;
    cells_.resize(static_cast<size_t>(nx_) * ny_);
    for (int e = 0; e < poly.size(); ++e) {
      auto [a, b] = poly.edge(e);
      visit_cells(a, b, [&](int cx, int cy) { cells_[cy * nx_ + cx].push_back(e); });
    }
  }

  // Candidate edge indices whose bins the segment [a,b] passes near.
  // May contain duplicates; callers dedupe with a stamp array.
  template <typename Fn>
  void for_candidates(Point a, Point b, Fn&& fn) const {
    visit_cells(a, b, [&](int cx, int cy) {
      for (int e : cells_[cy * nx_ + cx]) fn(e);
    });
  }

  const SimplePolygon& polygon() const { return *poly_; }

 private:
  template <typename Fn>
  void visit_cells(Point a, Point b, Fn&& fn) const {
    const int x0 = clampx(static_cast<int>(std::floor((std::min(a.x, b.x) - lo_.x) / cell_)) - 1);
    const int x1 = clampx(static_cast<int>(std::floor((std::max(a.x, b.x) - lo_.x) / cell_)) + 1);
    const int y0 = clampy(static_cast<int>(std::floor((std::min(a.y, b.y) - lo_.y) / cell_)) - 1);
    const int y1 = clampy(static_cast<int>(std::floor((std::max(a.y, b.y) - lo_.y) / cell_)) + 1);
    // Walk the bbox of the segment row by row, skipping cells the segment
    // misses by more than one cell diagonal.
    const double reach = cell_ * 1.5;
    for (int cy = y0; cy <= y1; ++cy) {
      for (int cx = x0; cx <= x1; ++cx) {
        const Point center{lo_.x + (cx + 0.5) * cell_, lo_.y + (cy + 0.5) * cell_};
        if (point_segment_distance(center, a, b) <= reach) fn(cx, cy);
      }
    }
  }

  int clampx(int v) const { return std::clamp(v, 0, nx_ - 1); }
  int clampy(int v) const { return std::clamp(v, 0, ny_ - 1); }

  const SimplePolygon* poly_;
  Point lo_;
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> cells_;
};

}  // namespace quadlab
