#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include <quadlab/geodesic.hpp>
#include <quadlab/modulus.hpp>

#include "common.hpp"

using namespace quadlab;
using qt::error_code;

TEST_CASE("unit square modulus is 1 by symmetry") {
  const auto r = compute_modulus(qt::unit_square(), 1.0 / 32);
  REQUIRE(r.modulus == Catch::Approx(1.0).epsilon(0.005));
}

TEST_CASE("2x1 rectangle modulus is 2, grid-exact up to solver tolerance") {
  const auto r = compute_modulus(qt::rect_quad(), 1.0 / 32);
  REQUIRE(r.modulus == Catch::Approx(2.0).epsilon(0.01));
  // u = x/2 solves the discrete system exactly, so the error is CG-level.
  REQUIRE(r.modulus == Catch::Approx(2.0).margin(1e-6));
}

TEST_CASE("rectangle extrapolation is flat") {
  const double levels[] = {1.0 / 16, 1.0 / 32};
  const auto r = modulus_extrapolated(qt::rect_quad(), levels);
  REQUIRE(r.modulus == Catch::Approx(2.0).margin(1e-5));
  REQUIRE(r.error_estimate < 1e-3);
}

TEST_CASE("L-polygon modulus: extrapolation behaves and reciprocity holds") {
  const double levels[] = {1.0 / 32, 1.0 / 64, 1.0 / 128};
  const auto r = modulus_extrapolated(qt::l_quad(), levels);
  // Pinned by extrapolation over these levels; the reentrant corner drives
  // the fitted order towards 4/3.
  REQUIRE(r.levels[1].second == Catch::Approx(0.577139).epsilon(1e-3));
  REQUIRE(r.extrapolated == Catch::Approx(0.577350).epsilon(1e-3));
  REQUIRE(r.fitted_order > 0.5);
  REQUIRE(r.fitted_order < 2.2);
  // Monotone level sequence.
  REQUIRE(((r.levels[0].second <= r.levels[1].second &&
            r.levels[1].second <= r.levels[2].second) ||
           (r.levels[0].second >= r.levels[1].second &&
            r.levels[1].second >= r.levels[2].second)));

  const auto rc = modulus_extrapolated(conjugate(qt::l_quad()), levels);
  const double rel_err = (r.error_estimate / r.modulus + rc.error_estimate / rc.modulus);
  REQUIRE(std::abs(r.modulus * rc.modulus - 1.0) <= std::max(0.02, 2.0 * rel_err));
}

TEST_CASE("maximum principle: potential stays within the plate values") {
  const auto r = compute_modulus(qt::l_quad(), 1.0 / 32);
  REQUIRE(r.u_min >= -1e-12);
  REQUIRE(r.u_max <= 1.0 + 1e-12);
}

TEST_CASE("modulus is scale invariant bit-for-bit when h scales along") {
  const auto a = compute_modulus(qt::l_quad(), 1.0 / 32);
  const auto b = compute_modulus(scaled(qt::l_quad(), 2.0), 2.0 / 32);
  REQUIRE(a.energy == b.energy);
}

TEST_CASE("off-grid and non-rectilinear inputs are rejected, not snapped") {
  REQUIRE(error_code([] { compute_modulus(qt::diamond_quad(), 1.0 / 32); }) ==
          Errc::not_rectilinear);
  REQUIRE(error_code([] { compute_modulus(qt::rect_quad(), 0.3); }) ==
          Errc::coordinates_not_on_grid);
}

TEST_CASE("Rengel bounds: anchor values") {
  const auto b1 = rengel_bounds(1.0, 1.0);
  // (ln 3)^2 / (pi (1 + 2 ln 3)) and its reciprocal
  const double ln3 = std::log(3.0);
  const double expect_lower = ln3 * ln3 / (std::numbers::pi * (1.0 + 2.0 * ln3));
  REQUIRE(b1.lower == Catch::Approx(expect_lower).epsilon(1e-12));
  REQUIRE(b1.lower == Catch::Approx(0.12016).epsilon(1e-4));
  REQUIRE(b1.upper == Catch::Approx(8.3222).epsilon(1e-4));
  REQUIRE(b1.lower * b1.upper == Catch::Approx(1.0).epsilon(1e-12));

  const auto b2 = rengel_bounds(1.0, 2.0);
  const double ln2 = std::log(2.0), ln5 = std::log(5.0);
  REQUIRE(b2.lower ==
          Catch::Approx(ln5 * ln5 / (std::numbers::pi * (1.0 + 2.0 * ln5))).epsilon(1e-12));
  REQUIRE(b2.upper ==
          Catch::Approx(std::numbers::pi * (1.0 + 2.0 * ln2) / (ln2 * ln2)).epsilon(1e-12));
  REQUIRE(b2.lower == Catch::Approx(0.195435).epsilon(1e-4));
  REQUIRE(b2.upper == Catch::Approx(15.6035).epsilon(1e-4));
  // Computed M = 2 for the 2x1 rectangle lies inside.
  REQUIRE(b2.lower <= 2.0);
  REQUIRE(2.0 <= b2.upper);

  REQUIRE(error_code([] { rengel_bounds(0.0, 1.0); }) == Errc::non_positive_distance);
}

TEST_CASE("ratio bound from K") {
  const double l1 = ratio_bound_from_K(1.0);
  // Closed form as an independent oracle: u = pi K + sqrt(pi^2 K^2 + pi K),
  // x = (e^u - 1) / 2.
  const double pi = std::numbers::pi;
  const double u = pi + std::sqrt(pi * pi + pi);
  REQUIRE(l1 == Catch::Approx(0.5 * std::expm1(u)).epsilon(1e-9));
  REQUIRE(l1 == Catch::Approx(425.9).epsilon(5e-4));
  // lower(L~) == K within 1e-9.
  const auto back = rengel_bounds(1.0, l1);
  REQUIRE(back.lower == Catch::Approx(1.0).margin(1e-9));

  REQUIRE(error_code([] { ratio_bound_from_K(0.9); }) == Errc::invalid_argument);
  REQUIRE(ratio_bound_from_K(2.0) > ratio_bound_from_K(1.0));
}

TEST_CASE("conjugate swaps internal distances and inverts the modulus") {
  auto q = qt::rect_quad();
  auto qc = conjugate(q);
  REQUIRE(geodesic_between_sides(qc, SidePair::A).length == Catch::Approx(2.0));
  REQUIRE(geodesic_between_sides(qc, SidePair::B).length == Catch::Approx(1.0));

  auto q4 = conjugate(conjugate(conjugate(conjugate(q))));
  REQUIRE(q4.marks() == q.marks());

  const auto m = compute_modulus(q, 1.0 / 32);
  const auto mc = compute_modulus(qc, 1.0 / 32);
  REQUIRE(m.modulus * mc.modulus == Catch::Approx(1.0).epsilon(0.02));
}

TEST_CASE("Rengel sandwich on the rectilinear fixtures") {
  for (const auto& q : {qt::rect_quad(), qt::unit_square(), qt::l_quad(), qt::u_quad()}) {
    const double s_a = geodesic_between_sides(q, SidePair::A).length;
    const double s_b = geodesic_between_sides(q, SidePair::B).length;
    const auto bounds = rengel_bounds(s_a, s_b);
    const double h0 = grid_step(q, 32);
    const double levels[] = {h0, h0 / 2};
    const auto m = modulus_extrapolated(q, levels);
    REQUIRE(bounds.lower - m.error_estimate <= m.modulus);
    REQUIRE(m.modulus <= bounds.upper + m.error_estimate);
  }
}
