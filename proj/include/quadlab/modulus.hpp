// Conformal modulus of a rectilinear marked quadrilateral.
//
// M(Q) is computed as the reciprocal Dirichlet energy of the mixed
// boundary-value Laplace problem: u = 0 on side B2, u = 1 on side B1,
// natural (zero Neumann) condition on both a-sides. With that convention a
// corner-marked W x 1 rectangle has u = x/W and M = W, the extremal distance
// between the b-sides.
//
// The discrete energy is the bilinear cell energy
//   E(u) = sum over inside cells of ((du_x)^2 + (du_y)^2) / 2 per corner pair,
// equivalently a weighted graph Laplacian with grid-edge weights
// (#adjacent inside cells) / 2. The minimizer solves the 5-point scheme; the
// system is solved matrix-free by Jacobi-preconditioned conjugate gradients.
//
// Also in this header: Rengel's modulus bounds from the internal distances,
// their numerical inversion (the ratio bound L~ as a function of K), and the
// conjugate quadrilateral.

#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "geometry.hpp"

namespace quadlab {

enum class NodeClass : std::uint8_t { outside, interior, dirichlet0, dirichlet1, neumann };

struct GridDiscretization {
  double h = 0.0;
  Point origin;            // lattice point (0,0)
  int nx = 0, ny = 0;      // lattice extents (nodes)
  std::vector<NodeClass> classes;

  int index(int ix, int iy) const { return iy * nx + ix; }
  NodeClass at(int ix, int iy) const { return classes[index(ix, iy)]; }
};

struct ModulusResult {
  double modulus = 0.0;
  double energy = 0.0;
  std::vector<std::pair<double, double>> levels;  // (h, M(h)), coarse to fine
  double error_estimate = 0.0;
  double extrapolated = 0.0;
  double fitted_order = 0.0;
  long iterations = 0;
  double u_min = 0.0, u_max = 0.0;  // maximum-principle telemetry
};

namespace detail {

inline long long snap_to_grid(double c, double h, const char* what) {
  const double k = c / h;
  const double r = std::round(k);
  if (std::abs(k - r) > 1e-9 * std::max(1.0, std::abs(k)))
    fail(Errc::coordinates_not_on_grid,
         std::string(what) + " coordinate " + std::to_string(c) +
             " is not a multiple of h = " + std::to_string(h));
  return static_cast<long long>(r);
}

// Exact fraction key along the boundary: edge index plus num/den in [0,1).
struct BoundaryKey {
  int edge = 0;
  long long num = 0, den = 1;

  friend bool operator==(const BoundaryKey& a, const BoundaryKey& b) {
    return a.edge == b.edge && a.num * b.den == b.num * a.den;
  }
  friend bool operator<(const BoundaryKey& a, const BoundaryKey& b) {
    if (a.edge != b.edge) return a.edge < b.edge;
    return a.num * b.den < b.num * a.den;
  }
};

}  // namespace detail

// Builds the node classification for a rectilinear on-grid quadrilateral.
inline GridDiscretization discretize(const MarkedQuadrilateral& q, double h) {
  const SimplePolygon& poly = q.polygon();
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    auto [a, b] = poly.edge(i);
    if (a.x != b.x && a.y != b.y)
      fail(Errc::not_rectilinear, "edge " + std::to_string(i) + " is not axis-parallel");
  }

  std::vector<std::pair<long long, long long>> iv(n);
  for (int i = 0; i < n; ++i)
    iv[i] = {detail::snap_to_grid(poly.vertex(i).x, h, "vertex"),
             detail::snap_to_grid(poly.vertex(i).y, h, "vertex")};

  long long ix_min = iv[0].first, ix_max = iv[0].first;
  long long iy_min = iv[0].second, iy_max = iv[0].second;
  for (const auto& [x, y] : iv) {
    ix_min = std::min(ix_min, x);
    ix_max = std::max(ix_max, x);
    iy_min = std::min(iy_min, y);
    iy_max = std::max(iy_max, y);
  }

  GridDiscretization g;
  g.h = h;
  g.origin = {ix_min * h, iy_min * h};
  g.nx = static_cast<int>(ix_max - ix_min) + 1;
  g.ny = static_cast<int>(iy_max - iy_min) + 1;
  g.classes.assign(static_cast<size_t>(g.nx) * g.ny, NodeClass::outside);

  // Boundary lattice nodes, each enumerated once with a canonical exact key
  // (edge, k/m) with k < m.
  std::vector<std::pair<int, detail::BoundaryKey>> boundary;  // node index -> key
  for (int e = 0; e < n; ++e) {
    const auto [ax, ay] = iv[e];
    const auto [bx, by] = iv[(e + 1) % n];
    const long long m = std::max(std::llabs(bx - ax), std::llabs(by - ay));
    const long long sx = (bx > ax) - (bx < ax), sy = (by > ay) - (by < ay);
    for (long long k = 0; k < m; ++k) {
      const long long x = ax + k * sx, y = ay + k * sy;
      const int idx = g.index(static_cast<int>(x - ix_min), static_cast<int>(y - iy_min));
      boundary.push_back({idx, {e, k, m}});
    }
  }

  // Marks must sit on lattice boundary nodes; find their exact keys.
  std::array<detail::BoundaryKey, 4> mark_keys;
  for (int j = 0; j < 4; ++j) {
    const Point mp = q.mark_point(j);
    const long long mx = detail::snap_to_grid(mp.x, h, "mark");
    const long long my = detail::snap_to_grid(mp.y, h, "mark");
    const int idx =
        g.index(static_cast<int>(mx - ix_min), static_cast<int>(my - iy_min));
    bool found = false;
    for (const auto& [bidx, key] : boundary) {
      if (bidx == idx) {
        mark_keys[j] = key;
        found = true;
        break;
      }
    }
    if (!found)
      fail(Errc::coordinates_not_on_grid, "mark " + std::to_string(j) + " is not a grid node");
  }

  // Cyclic position of a key relative to mark v1, as an exact fraction
  // comparison; classifies each boundary node into its side.
  auto cyclic_less = [n](const detail::BoundaryKey& a, const detail::BoundaryKey& b,
                         const detail::BoundaryKey& origin) {
    auto rel = [&](const detail::BoundaryKey& k) {
      // (edge + num/den - origin) mod n as an exact pair (int, fraction)
      long long e = k.edge - origin.edge;
      // fraction part: k.num/k.den - origin.num/origin.den
      long long fn = k.num * origin.den - origin.num * k.den;
      long long fd = k.den * origin.den;
      if (fn < 0) {
        fn += fd;
        e -= 1;
      }
      e = ((e % n) + n) % n;
      return std::pair<long long, double>{e, double(fn) / double(fd)};
    };
    return rel(a) < rel(b);
  };
  auto key_equal = [](const detail::BoundaryKey& a, const detail::BoundaryKey& b) {
    return a == b;
  };

  for (const auto& [idx, key] : boundary) {
    NodeClass cls;
    if (key_equal(key, mark_keys[1]) || key_equal(key, mark_keys[2])) {
      cls = NodeClass::dirichlet1;  // v2, v3 bound B1; Dirichlet wins corners
    } else if (key_equal(key, mark_keys[0]) || key_equal(key, mark_keys[3])) {
      cls = NodeClass::dirichlet0;  // v1, v4 bound B2
    } else if (cyclic_less(mark_keys[1], key, mark_keys[0]) &&
               cyclic_less(key, mark_keys[2], mark_keys[0])) {
      cls = NodeClass::dirichlet1;  // interior of B1 = (v2, v3)
    } else if (cyclic_less(mark_keys[3], key, mark_keys[0])) {
      cls = NodeClass::dirichlet0;  // interior of B2 = (v4, v1)
    } else {
      cls = NodeClass::neumann;  // a-sides
    }
    g.classes[idx] = cls;
  }

  // Interior nodes.
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const int idx = g.index(ix, iy);
      if (g.classes[idx] != NodeClass::outside) continue;
      const Point p{g.origin.x + ix * h, g.origin.y + iy * h};
      if (contains_point(poly, p) == Region::inside) g.classes[idx] = NodeClass::interior;
    }
  }
  return g;
}

// Solves the discrete mixed problem and returns M = 1 / E.
inline ModulusResult compute_modulus(const MarkedQuadrilateral& q, double h,
                                     double tol = 1e-10) {
  const GridDiscretization g = discretize(q, h);
  const SimplePolygon& poly = q.polygon();
  const int nx = g.nx, ny = g.ny;
  const int N = nx * ny;

  // Inside cells (cell (ix,iy) spans lattice [ix,ix+1]x[iy,iy+1]).
  std::vector<char> cell_inside(static_cast<size_t>(std::max(nx - 1, 0)) *
                                    std::max(ny - 1, 0),
                                0);
  for (int cy = 0; cy + 1 < ny; ++cy) {
    for (int cx = 0; cx + 1 < nx; ++cx) {
      const Point center{g.origin.x + (cx + 0.5) * h, g.origin.y + (cy + 0.5) * h};
      cell_inside[cy * (nx - 1) + cx] =
          contains_point(poly, center) == Region::inside;
    }
  }
  auto cin = [&](int cx, int cy) -> double {
    if (cx < 0 || cy < 0 || cx >= nx - 1 || cy >= ny - 1) return 0.0;
    return cell_inside[cy * (nx - 1) + cx] ? 1.0 : 0.0;
  };
  // Weight of the grid edge from (ix,iy) towards +x or +y.
  auto weight = [&](int ix, int iy, bool horizontal) {
    if (horizontal) return 0.5 * (cin(ix, iy - 1) + cin(ix, iy));
    return 0.5 * (cin(ix - 1, iy) + cin(ix, iy));
  };

  auto dirichlet_value = [&](NodeClass c) -> double {
    return c == NodeClass::dirichlet1 ? 1.0 : 0.0;
  };
  auto is_free = [&](NodeClass c) {
    return c == NodeClass::interior || c == NodeClass::neumann;
  };
  auto is_fixed = [&](NodeClass c) {
    return c == NodeClass::dirichlet0 || c == NodeClass::dirichlet1;
  };

  // Number the free unknowns and build the compact stencil.
  std::vector<int> unknown(N, -1);
  std::vector<int> free_nodes;
  for (int i = 0; i < N; ++i)
    if (is_free(g.classes[i])) {
      unknown[i] = static_cast<int>(free_nodes.size());
      free_nodes.push_back(i);
    }
  const int M = static_cast<int>(free_nodes.size());
  if (M == 0) fail(Errc::grid_too_coarse, "no free nodes at this grid step");

  std::vector<std::array<int, 4>> nbr(M);
  std::vector<std::array<double, 4>> nw(M);
  std::vector<double> diag(M, 0.0), rhs(M, 0.0);
  const int dxs[4] = {1, -1, 0, 0};
  const int dys[4] = {0, 0, 1, -1};
  for (int u = 0; u < M; ++u) {
    const int i = free_nodes[u];
    const int ix = i % nx, iy = i / nx;
    for (int k = 0; k < 4; ++k) {
      nbr[u][k] = -1;
      nw[u][k] = 0.0;
      const int jx = ix + dxs[k], jy = iy + dys[k];
      if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
      const bool horizontal = dys[k] == 0;
      const double w = horizontal ? weight(std::min(ix, jx), iy, true)
                                  : weight(ix, std::min(iy, jy), false);
      if (w <= 0.0) continue;
      const int j = g.index(jx, jy);
      const NodeClass cj = g.classes[j];
      if (is_free(cj)) {
        nbr[u][k] = unknown[j];
        nw[u][k] = w;
        diag[u] += w;
      } else if (is_fixed(cj)) {
        diag[u] += w;
        rhs[u] += w * dirichlet_value(cj);
      }
      // outside neighbors carry weight 0 by construction
    }
  }

  // CG with Jacobi preconditioning on A x = rhs.
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (int u = 0; u < M; ++u) {
      double acc = diag[u] * x[u];
      for (int k = 0; k < 4; ++k)
        if (nbr[u][k] >= 0) acc -= nw[u][k] * x[nbr[u][k]];
      y[u] = acc;
    }
  };

  std::vector<double> x(M, 0.0), r(M), z(M), p(M), Ap(M);
  apply(x, Ap);
  double rhs_norm2 = 0.0;
  for (int u = 0; u < M; ++u) {
    r[u] = rhs[u] - Ap[u];
    rhs_norm2 += rhs[u] * rhs[u];
  }
  const double stop2 = tol * tol * std::max(rhs_norm2, 1e-300);
  auto precond = [&](const std::vector<double>& rr, std::vector<double>& zz) {
    for (int u = 0; u < M; ++u) zz[u] = diag[u] > 0 ? rr[u] / diag[u] : rr[u];
  };
  precond(r, z);
  p = z;
  double rz = 0.0, rr2 = 0.0;
  for (int u = 0; u < M; ++u) {
    rz += r[u] * z[u];
    rr2 += r[u] * r[u];
  }
  const long cap = 50L * M;
  long iters = 0;
  while (rr2 > stop2 && iters < cap) {
    apply(p, Ap);
    double pAp = 0.0;
    for (int u = 0; u < M; ++u) pAp += p[u] * Ap[u];
    if (pAp <= 0.0) break;  // SPD system: only possible at round-off floor
    const double alpha = rz / pAp;
    rr2 = 0.0;
    for (int u = 0; u < M; ++u) {
      x[u] += alpha * p[u];
      r[u] -= alpha * Ap[u];
      rr2 += r[u] * r[u];
    }
    precond(r, z);
    double rz_new = 0.0;
    for (int u = 0; u < M; ++u) rz_new += r[u] * z[u];
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int u = 0; u < M; ++u) p[u] = z[u] + beta * p[u];
    ++iters;
  }
  if (rr2 > stop2)
    fail(Errc::solver_diverged,
         "CG did not reach tolerance in " + std::to_string(cap) + " iterations");

  // Full nodal field for the energy sum.
  std::vector<double> u_full(N, 0.0);
  for (int i = 0; i < N; ++i)
    if (is_fixed(g.classes[i])) u_full[i] = dirichlet_value(g.classes[i]);
  for (int uidx = 0; uidx < M; ++uidx) u_full[free_nodes[uidx]] = x[uidx];

  double energy = 0.0;
  double umin = std::numeric_limits<double>::infinity(), umax = -umin;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const int i = g.index(ix, iy);
      if (g.classes[i] == NodeClass::outside) continue;
      umin = std::min(umin, u_full[i]);
      umax = std::max(umax, u_full[i]);
      if (ix + 1 < nx) {
        const double w = weight(ix, iy, true);
        if (w > 0.0 && g.classes[g.index(ix + 1, iy)] != NodeClass::outside) {
          const double du = u_full[g.index(ix + 1, iy)] - u_full[i];
          energy += w * du * du;
        }
      }
      if (iy + 1 < ny) {
        const double w = weight(ix, iy, false);
        if (w > 0.0 && g.classes[g.index(ix, iy + 1)] != NodeClass::outside) {
          const double du = u_full[g.index(ix, iy + 1)] - u_full[i];
          energy += w * du * du;
        }
      }
    }
  }
  if (!(energy > 0.0)) fail(Errc::solver_diverged, "degenerate zero energy");

  ModulusResult res;
  res.energy = energy;
  res.modulus = 1.0 / energy;
  res.levels = {{h, res.modulus}};
  res.extrapolated = res.modulus;
  res.error_estimate = 0.0;
  res.iterations = iters;
  res.u_min = umin;
  res.u_max = umax;
  return res;
}

// Richardson extrapolation over successively halved grid steps. With three
// or more levels the order p is fitted from the last three (reentrant
// corners push p below 2); with two levels p = 2 is assumed.
inline ModulusResult modulus_extrapolated(const MarkedQuadrilateral& q,
                                          std::span<const double> levels,
                                          double tol = 1e-10) {
  if (levels.size() < 2) fail(Errc::invalid_argument, "need at least two levels");
  for (size_t i = 0; i + 1 < levels.size(); ++i)
    if (std::abs(levels[i] / levels[i + 1] - 2.0) > 1e-9)
      fail(Errc::invalid_argument, "levels must halve h");

  ModulusResult res;
  long total_iters = 0;
  for (double h : levels) {
    ModulusResult one = compute_modulus(q, h, tol);
    res.levels.push_back({h, one.modulus});
    total_iters += one.iterations;
    res.energy = one.energy;
    res.modulus = one.modulus;
    res.u_min = one.u_min;
    res.u_max = one.u_max;
  }
  res.iterations = total_iters;

  const size_t L = res.levels.size();
  const double m_fine = res.levels[L - 1].second;
  const double m_mid = res.levels[L - 2].second;
  double p = 2.0;
  if (L >= 3) {
    const double m_coarse = res.levels[L - 3].second;
    const double d1 = m_mid - m_coarse;
    const double d2 = m_fine - m_mid;
    if (d1 != 0.0 && d2 != 0.0 && d1 / d2 > 0.0) p = std::log2(d1 / d2);
  }
  res.fitted_order = p;
  const double denom = std::pow(2.0, p) - 1.0;
  const double diff = m_fine - m_mid;
  res.extrapolated = (denom > 1e-9) ? m_fine + diff / denom : m_fine;
  res.error_estimate = std::abs(m_fine - res.extrapolated);
  // The extrapolation step itself is only an estimate; report the fine value
  // as the modulus and keep the extrapolated value alongside.
  res.modulus = m_fine;
  res.energy = 1.0 / m_fine;
  return res;
}

// Largest power-of-two step with roughly `target_cells` cells across the
// bounding box such that every vertex and mark coordinate is an exact
// multiple. Inputs whose coordinates are not dyadic-rational within 60
// halvings are rejected.
inline double grid_step(const MarkedQuadrilateral& q, int target_cells) {
  const Box bb = q.polygon().bbox();
  const double span = std::max(bb.width(), bb.height());
  auto aligned = [&](double h) {
    auto ok = [&](double c) {
      const double k = c / h;
      return std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, std::abs(k));
    };
    for (const Point& p : q.polygon().vertices())
      if (!ok(p.x) || !ok(p.y)) return false;
    for (int j = 0; j < 4; ++j) {
      const Point mp = q.mark_point(j);
      if (!ok(mp.x) || !ok(mp.y)) return false;
    }
    return true;
  };
  double h = std::exp2(std::floor(std::log2(span / target_cells)));
  for (int i = 0; i < 60; ++i, h /= 2.0)
    if (aligned(h)) return h;
  fail(Errc::coordinates_not_on_grid, "no dyadic grid step aligns with the coordinates");
}

// ---------------------------------------------------------------------------
// Rengel bounds and the ratio bound

struct RengelBounds {
  double lower = 0.0;
  double upper = 0.0;
};

inline RengelBounds rengel_bounds(double s_a, double s_b) {
  if (!(s_a > 0.0) || !(s_b > 0.0))
    fail(Errc::non_positive_distance, "internal distances must be positive");
  const double pi = std::numbers::pi;
  const double lb = std::log1p(2.0 * s_b / s_a);
  const double la = std::log1p(2.0 * s_a / s_b);
  RengelBounds r;
  r.lower = lb * lb / (pi + 2.0 * pi * lb);
  r.upper = (pi + 2.0 * pi * la) / (la * la);
  return r;
}

// Smallest L~ such that M(Q) in [1/K, K] forces s_a/s_b in [1/L~, L~].
// The Rengel lower bound, as a function of x = s_b/s_a, is increasing, so
// L~ solves lower(x) = K; by the upper bound's symmetry the same value
// bounds s_a/s_b. Bisection runs on u = log(1 + 2x).
inline double ratio_bound_from_K(double K) {
  if (!(K >= 1.0)) fail(Errc::invalid_argument, "K must be >= 1");
  const double pi = std::numbers::pi;
  auto lower_of_u = [&](double u) { return u * u / (pi + 2.0 * pi * u); };
  double ulo = 1e-12, uhi = 1.0;
  while (lower_of_u(uhi) < K) uhi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double um = 0.5 * (ulo + uhi);
    (lower_of_u(um) < K ? ulo : uhi) = um;
  }
  const double u = 0.5 * (ulo + uhi);
  return 0.5 * std::expm1(u);
}

// Same polygon, marks rotated by one position: sides swap roles (a <-> b).
inline MarkedQuadrilateral conjugate(const MarkedQuadrilateral& q) {
  const auto& m = q.marks();
  return mark_quadrilateral(q.polygon(), {m[1], m[2], m[3], m[0]});
}

}  // namespace quadlab
