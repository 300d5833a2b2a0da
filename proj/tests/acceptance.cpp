// Acceptance suite: one verifiable criterion per function, each printing a
// single [PASS] / [FAIL] line. Run all with no arguments or one criterion by
// number (1..9). The process exits with the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <vector>

#include <quadlab/batch.hpp>
#include <quadlab/generator.hpp>
#include <quadlab/grid_oracle.hpp>
#include <quadlab/svg.hpp>

using namespace quadlab;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

MarkedQuadrilateral corner_rect(double w, double h) {
  return mark_quadrilateral(validate_polygon({{0, 0}, {w, 0}, {w, h}, {0, h}}),
                            {BoundaryLocation{0, 0}, BoundaryLocation{1, 0},
                             BoundaryLocation{2, 0}, BoundaryLocation{3, 0}});
}

MarkedQuadrilateral diamond() {
  return mark_quadrilateral(validate_polygon({{1, 0}, {2, 1}, {1, 2}, {0, 1}}),
                            {BoundaryLocation{0, 0}, BoundaryLocation{1, 0},
                             BoundaryLocation{2, 0}, BoundaryLocation{3, 0}});
}

MarkedQuadrilateral rotated_square(double angle_deg) {
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double c = std::cos(a), s = std::sin(a);
  auto rot = [&](double x, double y) { return Point{c * x - s * y, s * x + c * y}; };
  return mark_quadrilateral(
      validate_polygon({rot(0, 0), rot(3, 0), rot(3, 2), rot(0, 2)}),
      {BoundaryLocation{0, 0}, BoundaryLocation{1, 0}, BoundaryLocation{2, 0},
       BoundaryLocation{3, 0}});
}

GeneratorParams corpus_params(std::uint64_t seed) {
  return {seed, seed % 2 ? 16 : 32, 60};
}

// 1. Modulus anchors on corner-marked rectangles.
Check criterion1() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rect = compute_modulus(corner_rect(2, 1), 1.0 / 32);
  c.expect(std::abs(rect.modulus - 2.0) <= 0.01 * 2.0,
           "M(2x1) = " + std::to_string(rect.modulus));
  const auto sq = compute_modulus(corner_rect(1, 1), 1.0 / 32);
  c.expect(std::abs(sq.modulus - 1.0) <= 0.005,
           "M(square) = " + std::to_string(sq.modulus));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < 5.0, "anchors took " + std::to_string(secs) + " s");
  c.detail = "M(2x1) = " + std::to_string(rect.modulus) +
             ", M(square) = " + std::to_string(sq.modulus) + (c.ok ? "" : "; " + c.detail);
  return c;
}

// 2. Conjugate reciprocity at ~256 cells across the bounding box.
Check criterion2() {
  Check c;
  double worst = 0.0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto q = generate_random_rectilinear(corpus_params(seed));
    const double h = grid_step(q, 256);
    const double m = compute_modulus(q, h).modulus;
    const double mc = compute_modulus(conjugate(q), h).modulus;
    const double dev = std::abs(m * mc - 1.0);
    worst = std::max(worst, dev);
    c.expect(dev <= 0.02, "seed " + std::to_string(seed) + ": |M M' - 1| = " + std::to_string(dev));
  }
  c.detail = "20 instances, worst |M M' - 1| = " + std::to_string(worst) +
             (c.ok ? "" : "; " + c.detail);
  return c;
}

// 3. Rengel sandwich with the extrapolation error budget.
Check criterion3() {
  Check c;
  int violations = 0;
  for (std::uint64_t seed = 200; seed < 300; ++seed) {
    const auto q = generate_random_rectilinear(corpus_params(seed));
    const double s_a = geodesic_between_sides(q, SidePair::A).length;
    const double s_b = geodesic_between_sides(q, SidePair::B).length;
    const auto bounds = rengel_bounds(s_a, s_b);
    const double h = grid_step(q, 64);
    const double levels[2] = {h, h / 2};
    const auto m = modulus_extrapolated(q, levels);
    const bool ok = bounds.lower - m.error_estimate <= m.modulus &&
                    m.modulus <= bounds.upper + m.error_estimate;
    if (!ok) {
      ++violations;
      c.expect(false, "seed " + std::to_string(seed));
    }
  }
  c.detail = "100 instances, " + std::to_string(violations) + " violations" +
             (c.ok ? "" : "; " + c.detail);
  return c;
}

// 4. Truncated-distance sandwich s <= s_delta <= s + 4 pi delta.
Check criterion4() {
  Check c;
  int violations = 0;
  for (std::uint64_t seed = 300; seed < 350; ++seed) {
    const auto q = generate_random_rectilinear(corpus_params(seed));
    const double delta = 0.9 * validate_exclusion_delta(q, 0.0).limit;
    for (SidePair pair : {SidePair::A, SidePair::B}) {
      const double s = geodesic_between_sides(q, pair).length;
      const double sd = truncated_internal_distance(q, pair, ExclusionSpec{delta}).length;
      const bool ok = s - 1e-9 <= sd && sd <= s + 4.0 * std::numbers::pi * delta + 1e-9;
      if (!ok) {
        ++violations;
        c.expect(false, "seed " + std::to_string(seed));
      }
    }
  }
  c.detail = "50 instances x 2 pairs, " + std::to_string(violations) + " violations" +
             (c.ok ? "" : "; " + c.detail);
  return c;
}

// 5. Rectification at tau = 0.1: containment, deviations, ratio transfer.
Check criterion5() {
  Check c;
  std::vector<MarkedQuadrilateral> instances{diamond(), rotated_square(31.0),
                                             corner_rect(2, 1)};
  for (std::uint64_t seed = 400; seed < 417; ++seed)
    instances.push_back(generate_random_rectilinear(corpus_params(seed)));
  int done = 0;
  for (const auto& q : instances) {
    try {
      const auto r = rectify_to_tolerance(q, 0.1);
      const double budget = 0.1 * std::min(r.s_a_q, r.s_b_q);
      c.expect(r.dev_a <= budget + 1e-9 && r.dev_b <= budget + 1e-9, "deviation bound");
      c.expect(r.ratio_qt >= (1 - 0.1) / (1 + 0.1) * r.ratio_q - 1e-9 &&
                   r.ratio_qt <= (1 + 0.1) / (1 - 0.1) * r.ratio_q + 1e-9,
               "ratio transfer");
      const auto& pt = r.quad.polygon();
      const double per = pt.perimeter();
      bool contained = true;
      for (int i = 0; i < 256; ++i) {
        const Point p = pt.point_at(pt.location_at_arclength(per * i / 256.0));
        if (contains_point(q.polygon(), p) == Region::outside &&
            distance_to_boundary(q.polygon(), p) > q.polygon().tolerance())
          contained = false;
      }
      c.expect(contained, "containment");
      ++done;
    } catch (const Error& e) {
      c.expect(false, std::string("rectification failed: ") + e.what());
    }
  }
  c.detail = std::to_string(done) + "/20 instances rectified" + (c.ok ? "" : "; " + c.detail);
  return c;
}

// 6. Constructive inscribed disk of radius s_a / (1000 L) on 200 instances,
// with exit and split/confinement checks at 10 window positions each.
Check criterion6() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  int constructive = 0, prop_checks = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto q = generate_random_rectilinear(corpus_params(seed));
    const GeodesicResult ga = geodesic_between_sides(q, SidePair::A);
    const GeodesicResult gb = geodesic_between_sides(q, SidePair::B);
    const double L = std::max(ga.length / gb.length, gb.length / ga.length);
    PipelineTrace trace;
    const auto d = construct_disk(q, L, &trace, &ga, &gb);
    const double required = ga.length / (1000.0 * L);
    const bool verified =
        d.radius >= required - 1e-15 &&
        contains_point(q.polygon(), d.center) == Region::inside &&
        distance_to_boundary(q.polygon(), d.center) >= d.radius * (1 - 1e-9);
    c.expect(verified, "seed " + std::to_string(seed) + ": disk not verified");
    if (d.provenance != DiskCandidate::Provenance::global_search) ++constructive;

    const auto frame = build_arc_frame(q, L, &ga, &gb);
    for (int i = 1; i <= 10; ++i) {
      const double w0 = frame.fp_lo + (frame.fp_hi - frame.fp_lo) * i / 11.0;
      c.expect(check_exits(frame, w0), "seed " + std::to_string(seed) + ": exit check");
      try {
        const auto sd = split_disk(q, frame, w0);
        c.expect(sd.good >= 0, "confinement");
        ++prop_checks;
      } catch (const Error& e) {
        c.expect(false, "seed " + std::to_string(seed) + " split: " + e.what());
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < 600.0, "runtime " + std::to_string(secs) + " s");
  c.expect(constructive >= 190, "constructive rate " + std::to_string(constructive) + "/200");
  c.detail = "200/200 disks, " + std::to_string(constructive) +
             " constructive, " + std::to_string(prop_checks) + " window checks, " +
             std::to_string(static_cast<int>(secs)) + " s" + (c.ok ? "" : "; " + c.detail);
  return c;
}

// 7. The full chain K -> L~ -> L -> delta on the unit square, against the
// closed-form root as an independent route.
Check criterion7() {
  Check c;
  const auto rep = verify_theorem(corner_rect(1, 1), VerifyMode::from_K, 1.0);
  const double pi = std::numbers::pi;
  const double u = pi + std::sqrt(pi * pi + pi);
  const double l_tilde_ref = 0.5 * std::expm1(u);
  c.expect(std::abs(rep.L_tilde - l_tilde_ref) <= 1e-4 * l_tilde_ref,
           "L~ = " + std::to_string(rep.L_tilde) + " vs " + std::to_string(l_tilde_ref));
  const double required_ref = 1.0 / (4.0 * 1000.0 * 3.0 * l_tilde_ref);
  c.expect(std::abs(rep.required_radius - required_ref) <= 1e-4 * required_ref,
           "required = " + std::to_string(rep.required_radius));
  c.expect(std::abs(rep.required_radius - 1.956e-7) <= 1e-3 * 1.956e-7,
           "required radius anchor");
  c.expect(rep.pass, "theorem report did not pass");
  const double global = largest_inscribed_disk(corner_rect(1, 1).polygon()).radius;
  c.expect(global >= rep.required_radius && std::abs(global - 0.5) < 1e-9,
           "global disk 0.5 dominates the requirement");
  char buf[160];
  std::snprintf(buf, sizeof(buf), "L~ = %.4f, delta = %.4e, required = %.4e <= found 0.5",
                rep.L_tilde, rep.delta, rep.required_radius);
  c.detail = buf + std::string(c.ok ? "" : "; " + c.detail);
  return c;
}

// 8. Pinch sweep: monotone certified upper bound, the fixed-threshold drop,
// the far-window disk condition, and the direct solve at t = 1.
Check criterion8() {
  Check c;
  const double K = 10.0;
  const double ts[] = {1.0, 0.5, 0.25, 0.125, 0.0625};
  double prev_upper = std::numeric_limits<double>::infinity();
  double last_upper = 0.0;
  for (double t : ts) {
    const auto inst = pinch_family({.t = t});
    const auto bounds = rengel_bounds(inst.s_a, inst.s_b);
    c.expect(bounds.upper < prev_upper,
             "upper bound not strictly decreasing at t = " + std::to_string(t));
    prev_upper = bounds.upper;
    last_upper = bounds.upper;
    const auto disk = pinch_disk_condition(inst.quad, inst.params.delta_test, 10);
    c.expect(disk.ok, "disk condition failed at t = " + std::to_string(t));
  }
  // The pinned threshold: the certified upper bound decays like
  // 2*pi / log(200/t), so reaching 1/K = 0.1 needs log(200/t) ~ 63, i.e.
  // t ~ 1e-26 -- far below double-precision geometry. The sweep ends at
  // 0.83; this sub-check states the requirement literally and reports it.
  c.expect(last_upper < 1.0 / K,
           "upper bound at sweep end = " + std::to_string(last_upper) +
               " has not dropped below 1/K = 0.1 (unreachable: needs t ~ 1e-26, "
               "below double-precision geometry; decay is ~2pi/log(200/t))");

  const auto inst1 = pinch_family({.t = 1.0});
  const auto b1 = rengel_bounds(inst1.s_a, inst1.s_b);
  const auto m1 = compute_modulus(inst1.quad, 0.1, 1e-8);
  c.expect(b1.lower <= m1.modulus && m1.modulus <= b1.upper,
           "direct solve at t = 1 outside the certified bounds");
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "upper: 1.297 -> %.3f (strictly decreasing), disk condition 5/5, "
                "M(t=1) = %.4f in [%.2e, %.3f]",
                last_upper, m1.modulus, b1.lower, b1.upper);
  c.detail = buf + std::string(c.ok ? "" : "; " + c.detail);
  return c;
}

// 9. Oracle equivalence for geodesics (1%) and inscribed disks (2%).
Check criterion9() {
  Check c;
  double worst_geo = 0.0, worst_disk = 0.0;
  for (std::uint64_t seed = 500; seed < 530; ++seed) {
    const auto q = generate_random_rectilinear(corpus_params(seed));
    const Box bb = q.polygon().bbox();
    const double h = std::max(bb.width(), bb.height()) / 128.0;
    const double vis = geodesic_between_sides(q, SidePair::A).length;
    const auto oracle = geodesic_oracle(q, SidePair::A, h);
    const double rel = std::abs(oracle.corrected_length - vis) / vis;
    worst_geo = std::max(worst_geo, rel);
    c.expect(rel <= 0.01, "seed " + std::to_string(seed) + ": geodesic oracle off by " +
                              std::to_string(100 * rel) + "%");

    const auto d = largest_inscribed_disk(q.polygon());
    // Fine-grid disk oracle with local refinement.
    double step = std::max(bb.width(), bb.height()) / 512.0;
    Point best_p;
    double best = -1.0;
    for (double y = bb.lo.y; y <= bb.hi.y; y += step) {
      for (double x = bb.lo.x; x <= bb.hi.x; x += step) {
        const Point p{x, y};
        if (contains_point(q.polygon(), p) != Region::inside) continue;
        const double dd = distance_to_boundary(q.polygon(), p);
        if (dd > best) {
          best = dd;
          best_p = p;
        }
      }
    }
    for (int level = 0; level < 6; ++level) {
      step /= 2.0;
      const Point center = best_p;
      for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
          const Point p{center.x + dx * step, center.y + dy * step};
          if (contains_point(q.polygon(), p) != Region::inside) continue;
          const double dd = distance_to_boundary(q.polygon(), p);
          if (dd > best) {
            best = dd;
            best_p = p;
          }
        }
      }
    }
    const double drel = std::abs(d.radius - best) / best;
    worst_disk = std::max(worst_disk, drel);
    c.expect(d.radius >= best - 1e-9, "grid oracle beat the search");
    c.expect(drel <= 0.02, "seed " + std::to_string(seed) + ": disk oracle off by " +
                               std::to_string(100 * drel) + "%");
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "30 instances, worst geodesic dev %.3g%%, worst disk dev %.3g%%",
                100 * worst_geo, 100 * worst_disk);
  c.detail = buf + std::string(c.ok ? "" : "; " + c.detail);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const std::function<Check()> criteria[] = {criterion1, criterion2, criterion3,
                                             criterion4, criterion5, criterion6,
                                             criterion7, criterion8, criterion9};
  const char* names[] = {
      "modulus anchors (2x1 rectangle, unit square)",
      "conjugate reciprocity on 20 generated instances",
      "Rengel sandwich on 100 generated instances",
      "truncated-distance sandwich on 50 generated instances",
      "rectification to tau = 0.1 on 20 polygonal instances",
      "constructive disk radius s_a/(1000 L) on 200 instances",
      "modulus-window chain on the unit square (K = 1)",
      "pinch sweep: certified bounds vs the disk condition",
      "oracle equivalence for geodesics and inscribed disks",
  };
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failures = 0;
  for (int i = 0; i < 9; ++i) {
    if (only != 0 && only != i + 1) continue;
    Check c;
    try {
      c = criteria[i]();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s -- %s\n", c.ok ? "PASS" : "FAIL", i + 1, names[i],
                c.detail.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failures;
  }
  return failures;
}
