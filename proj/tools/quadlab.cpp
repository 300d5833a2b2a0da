// quadlab: internal distances, conformal moduli, rectilinear approximation,
// and inscribed-disk verification for marked quadrilaterals.
//
// Exit codes: 0 ok, 1 invariant failure, 2 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <quadlab/batch.hpp>
#include <quadlab/generator.hpp>
#include <quadlab/grid_oracle.hpp>
#include <quadlab/serialize.hpp>
#include <quadlab/svg.hpp>

using namespace quadlab;

namespace {

void emit(const Json& j, const std::string& output) {
  const std::string text = j.dump(2) + "\n";
  if (output.empty() || output == "-")
    std::cout << text;
  else
    save_text(output, text);
}

void write_svg(const std::string& path, const SvgBuilder& svg) {
  if (!path.empty()) save_text(path, svg.str());
}

SvgBuilder scene_with_polygon(const MarkedQuadrilateral& q) {
  SvgBuilder svg;
  svg.new_layer("polygon");
  svg.add_polygon(q.polygon());
  return svg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"marked-quadrilateral geometry lab"};
  app.require_subcommand(1);

  std::string input, output, svg_path;
  double h = 0.0, tol = 1e-10, tau = 0.1, s_grid = 0.0, L = 0.0, K = 0.0, delta = 0.0;
  int levels = 1;
  std::uint64_t seed = 0;
  int grid = 16, cells = 60;
  double pinch_t = 1.0;
  std::string pair = "both";

  auto* cmd_modulus = app.add_subcommand("modulus", "conformal modulus of a rectilinear quad");
  cmd_modulus->set_help_flag("--help", "print help");
  cmd_modulus->add_option("input,--input", input)->required();
  cmd_modulus->add_option("--h", h, "grid step (0: auto)");
  cmd_modulus->add_option("--levels", levels, "number of halving levels");
  cmd_modulus->add_option("--tol", tol);
  cmd_modulus->add_option("--output,-o", output);

  auto* cmd_dist = app.add_subcommand("distances", "internal distances s_a, s_b");
  cmd_dist->add_option("input,--input", input)->required();
  cmd_dist->add_option("--pair", pair, "a, b or both");
  cmd_dist->add_option("--delta", delta, "truncated variant with this delta");
  cmd_dist->add_option("--output,-o", output);

  auto* cmd_rectify = app.add_subcommand("rectify", "grid-square approximation");
  cmd_rectify->add_option("input,--input", input)->required();
  cmd_rectify->add_option("--tau", tau);
  cmd_rectify->add_option("--s", s_grid, "fixed grid side (skips the tolerance loop)");
  cmd_rectify->add_option("--svg", svg_path);
  cmd_rectify->add_option("--output,-o", output);

  auto* cmd_inscribe = app.add_subcommand("inscribe", "largest inscribed disk");
  cmd_inscribe->add_option("input,--input", input)->required();
  cmd_inscribe->add_option("--svg", svg_path);
  cmd_inscribe->add_option("--output,-o", output);

  auto* cmd_verify = app.add_subcommand("verify", "inscribed-disk theorem report");
  cmd_verify->add_option("input,--input", input)->required();
  auto* optL = cmd_verify->add_option("--L", L, "ratio bound mode");
  auto* optK = cmd_verify->add_option("--K", K, "modulus window mode");
  cmd_verify->add_option("--svg", svg_path);
  cmd_verify->add_option("--output,-o", output);

  auto* cmd_generate = app.add_subcommand("generate", "random rectilinear quadrilateral");
  cmd_generate->add_option("--seed", seed);
  cmd_generate->add_option("--grid", grid);
  cmd_generate->add_option("--cells", cells);
  cmd_generate->add_option("--output,-o", output);

  auto* cmd_pinch = app.add_subcommand("pinch", "pinch-family counterexample instance");
  cmd_pinch->add_option("--t", pinch_t)->required();
  cmd_pinch->add_option("--output,-o", output);

  auto* cmd_batch = app.add_subcommand("batch", "run a configured verification batch");
  std::string csv_path, json_path, batch_format = "json";
  cmd_batch->add_option("config,--input", input)->required();
  cmd_batch->add_option("--csv", csv_path, "also write the report as CSV here");
  cmd_batch->add_option("--json", json_path, "also write the report as JSON here");
  cmd_batch->add_option("--format", batch_format, "stdout format: json or csv");

  auto* cmd_render = app.add_subcommand("render", "render an instance to SVG");
  cmd_render->add_option("input,--input", input)->required();
  cmd_render->add_option("--output,-o", output)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_modulus->parsed()) {
      const auto q = load_quad(input);
      if (h <= 0.0) h = grid_step(q, 64);
      ModulusResult res;
      if (levels <= 1) {
        res = compute_modulus(q, h, tol);
      } else {
        std::vector<double> hs;
        for (int i = 0; i < levels; ++i) hs.push_back(h / std::exp2(i));
        res = modulus_extrapolated(q, hs, tol);
      }
      emit(to_json(res), output);
    } else if (cmd_dist->parsed()) {
      const auto q = load_quad(input);
      Json j;
      auto run = [&](SidePair sp, const char* name) {
        const GeodesicResult g = delta > 0.0
                                     ? truncated_internal_distance(q, sp, ExclusionSpec{delta})
                                     : geodesic_between_sides(q, sp);
        j[name] = to_json(g);
      };
      if (pair == "a" || pair == "both") run(SidePair::A, "a");
      if (pair == "b" || pair == "both") run(SidePair::B, "b");
      emit(j, output);
    } else if (cmd_rectify->parsed()) {
      const auto q = load_quad(input);
      const RectifiedQuad r =
          s_grid > 0.0 ? rectify(q, GridSpec{s_grid, {0, 0}}) : rectify_to_tolerance(q, tau);
      if (!svg_path.empty()) {
        SvgBuilder svg = scene_with_polygon(q);
        svg.new_layer("cover");
        svg.add_cells(grid_cover(q.polygon(), {r.s_used, r.origin_used}), r.s_used,
                      r.origin_used);
        svg.new_layer("rectified");
        svg.add_polygon(r.quad.polygon(), "#d62728");
        write_svg(svg_path, svg);
      }
      emit(to_json(r), output);
    } else if (cmd_inscribe->parsed()) {
      const auto q = load_quad(input);
      const DiskCandidate d = largest_inscribed_disk(q.polygon());
      if (!svg_path.empty()) {
        SvgBuilder svg = scene_with_polygon(q);
        svg.new_layer("disk");
        svg.add_circle(d.center, d.radius, "#2ca02c", "#c7e9c0");
        write_svg(svg_path, svg);
      }
      emit(to_json(d), output);
    } else if (cmd_verify->parsed()) {
      if ((optL->count() == 0) == (optK->count() == 0)) {
        std::cerr << "verify: exactly one of --L / --K is required\n";
        return 2;
      }
      const auto q = load_quad(input);
      const TheoremReport rep = optL->count() > 0
                                    ? verify_theorem(q, VerifyMode::from_L, L)
                                    : verify_theorem(q, VerifyMode::from_K, K);
      if (!svg_path.empty()) {
        SvgBuilder svg = scene_with_polygon(q);
        svg.new_layer("arc");
        const auto base = rep.conjugated ? conjugate(q) : q;
        svg.add_polyline(geodesic_between_sides(base, SidePair::A).path);
        svg.new_layer("disks");
        svg.add_circle(rep.trace.w0, 10.0 * rep.found.radius, "#9467bd");
        svg.add_circle(rep.found.center, rep.found.radius, "#2ca02c", "#c7e9c0");
        write_svg(svg_path, svg);
      }
      emit(to_json(rep), output);
      if (!rep.pass) return 1;
    } else if (cmd_generate->parsed()) {
      const auto q = generate_random_rectilinear({seed, grid, cells});
      emit(to_json(q), output);
    } else if (cmd_pinch->parsed()) {
      PinchParams p;
      p.t = pinch_t;
      const PinchInstance inst = pinch_family(p);
      Json j = to_json(inst.quad);
      j["s_a"] = inst.s_a;
      j["s_b"] = inst.s_b;
      j["pinch_height"] = inst.pinch_height;
      emit(j, output);
    } else if (cmd_batch->parsed()) {
      std::ifstream in(input);
      if (!in) {
        std::cerr << "cannot open " << input << "\n";
        return 2;
      }
      std::stringstream buf;
      buf << in.rdbuf();
      Json cfg_json = Json::parse(buf.str(), nullptr, false);
      if (cfg_json.is_discarded()) {
        std::cerr << "invalid batch config JSON\n";
        return 2;
      }
      const BatchConfig cfg = batch_config_from_json(cfg_json);
      const BatchReport report = run_batch(cfg);
      if (!csv_path.empty()) save_text(csv_path, to_csv(report));
      if (!json_path.empty()) save_text(json_path, to_json(report).dump(2) + "\n");
      if (batch_format == "csv")
        std::cout << to_csv(report);
      else
        emit(to_json(report), "");
      if (!report.all_pass) return 1;
    } else if (cmd_render->parsed()) {
      const auto q = load_quad(input);
      SvgBuilder svg = scene_with_polygon(q);
      svg.new_layer("marks");
      for (int j = 0; j < 4; ++j)
        svg.add_circle(q.mark_point(j), 0.01 * q.polygon().bbox().diagonal(), "#d62728",
                       "#d62728");
      write_svg(output, svg);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
