// Batch verification: runs the pipeline over a configured list of instances
// and assembles CSV / JSON reports. Rows never abort the batch; instances
// run on a bounded worker pool and the report keeps the configured order.

#pragma once

#include <atomic>
#include <chrono>
#include <thread>

#include "generator.hpp"
#include "serialize.hpp"

namespace quadlab {

struct BatchInstance {
  enum class Kind { generate, pinch, file, inline_json } kind = Kind::generate;
  std::string id;
  GeneratorParams gen;
  PinchParams pinch;
  std::string path;
  Json inline_quad;
};

struct BatchConfig {
  std::vector<BatchInstance> instances;
  enum class Mode { from_L, from_K } mode = Mode::from_L;
  double K = 1.0;
  bool with_modulus = false;
  int threads = 1;
};

enum class RowStatus { pass, fail, rejected, error };

struct BatchRow {
  std::string id;
  RowStatus status = RowStatus::error;
  std::string message;
  double s_a = 0.0, s_b = 0.0;
  double rengel_lower = 0.0, rengel_upper = 0.0;
  double modulus = 0.0;
  bool has_modulus = false;
  double required_radius = 0.0, found_radius = 0.0;
  std::string branch;
  double millis = 0.0;
};

struct BatchReport {
  std::vector<BatchRow> rows;
  int passed = 0, failed = 0, rejected = 0, errors = 0;
  bool all_pass = false;  // no failures and no errors
};

inline const char* to_string(RowStatus s) {
  switch (s) {
    case RowStatus::pass: return "pass";
    case RowStatus::fail: return "fail";
    case RowStatus::rejected: return "rejected";
    case RowStatus::error: return "error";
  }
  return "?";
}

inline BatchConfig batch_config_from_json(const Json& j) {
  BatchConfig cfg;
  if (j.contains("mode"))
    cfg.mode = j.at("mode").get<std::string>() == "from_K" ? BatchConfig::Mode::from_K
                                                           : BatchConfig::Mode::from_L;
  cfg.K = j.value("K", 1.0);
  cfg.with_modulus = j.value("modulus", false);
  cfg.threads = j.value("threads", 1);
  int counter = 0;
  for (const auto& it : j.value("instances", Json::array())) {
    BatchInstance inst;
    inst.id = it.value("id", "instance_" + std::to_string(counter));
    const std::string type = it.value("type", "generate");
    if (type == "generate") {
      inst.kind = BatchInstance::Kind::generate;
      inst.gen.seed = it.value("seed", static_cast<std::uint64_t>(counter));
      inst.gen.grid = it.value("grid", 16);
      inst.gen.target_cells = it.value("cells", 60);
    } else if (type == "pinch") {
      inst.kind = BatchInstance::Kind::pinch;
      inst.pinch.t = it.value("t", 1.0);
    } else if (type == "file") {
      inst.kind = BatchInstance::Kind::file;
      inst.path = it.value("path", "");
    } else if (type == "inline") {
      inst.kind = BatchInstance::Kind::inline_json;
      inst.inline_quad = it.value("quad", Json());
    } else {
      inst.kind = BatchInstance::Kind::file;
      inst.path = "";  // unknown type surfaces as an error row
    }
    cfg.instances.push_back(std::move(inst));
    ++counter;
  }
  return cfg;
}

namespace detail {

inline BatchRow run_one(const BatchConfig& cfg, const BatchInstance& inst) {
  BatchRow row;
  row.id = inst.id;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    MarkedQuadrilateral q;
    switch (inst.kind) {
      case BatchInstance::Kind::generate:
        q = generate_random_rectilinear(inst.gen);
        break;
      case BatchInstance::Kind::pinch:
        q = pinch_family(inst.pinch).quad;
        break;
      case BatchInstance::Kind::file:
        q = load_quad(inst.path);
        break;
      case BatchInstance::Kind::inline_json:
        q = quad_from_json(inst.inline_quad);
        break;
    }
    if (cfg.with_modulus) {
      try {
        const double h = grid_step(q, 64);
        const double levels[2] = {h, h / 2.0};
        const auto m = modulus_extrapolated(q, levels);
        row.modulus = m.modulus;
        row.has_modulus = true;
      } catch (const Error&) {
        // non-rectilinear or infeasible grid: modulus column stays empty
      }
    }
    const TheoremReport rep = cfg.mode == BatchConfig::Mode::from_L
                                  ? verify_theorem(q, VerifyMode::from_L, 0.0)
                                  : verify_theorem(q, VerifyMode::from_K, cfg.K);
    row.s_a = rep.s_a;
    row.s_b = rep.s_b;
    const auto bounds = rengel_bounds(row.s_a, row.s_b);
    row.rengel_lower = bounds.lower;
    row.rengel_upper = bounds.upper;
    row.required_radius = rep.required_radius;
    row.found_radius = rep.found.radius;
    row.branch = rep.trace.branch;
    row.status = rep.pass ? RowStatus::pass : RowStatus::fail;
    if (!rep.pass) row.message = "found radius below the required radius";
  } catch (const Error& e) {
    row.status = e.code() == Errc::modulus_out_of_range ? RowStatus::rejected
                                                        : RowStatus::error;
    row.message = e.what();
  }
  row.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                   .count();
  return row;
}

}  // namespace detail

inline BatchReport run_batch(const BatchConfig& cfg) {
  BatchReport report;
  report.rows.resize(cfg.instances.size());
  const int workers = std::max(1, cfg.threads);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= cfg.instances.size()) return;
      report.rows[i] = detail::run_one(cfg, cfg.instances[i]);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const BatchRow& row : report.rows) {
    switch (row.status) {
      case RowStatus::pass: ++report.passed; break;
      case RowStatus::fail: ++report.failed; break;
      case RowStatus::rejected: ++report.rejected; break;
      case RowStatus::error: ++report.errors; break;
    }
  }
  report.all_pass = report.failed == 0 && report.errors == 0;
  return report;
}

inline Json to_json(const BatchReport& r) {
  Json j;
  j["rows"] = Json::array();
  for (const BatchRow& row : r.rows) {
    Json jr;
    jr["id"] = row.id;
    jr["status"] = to_string(row.status);
    if (!row.message.empty()) jr["message"] = row.message;
    jr["s_a"] = row.s_a;
    jr["s_b"] = row.s_b;
    jr["rengel_lower"] = row.rengel_lower;
    jr["rengel_upper"] = row.rengel_upper;
    if (row.has_modulus) jr["modulus"] = row.modulus;
    jr["required_radius"] = row.required_radius;
    jr["found_radius"] = row.found_radius;
    jr["branch"] = row.branch;
    jr["millis"] = row.millis;
    j["rows"].push_back(std::move(jr));
  }
  j["passed"] = r.passed;
  j["failed"] = r.failed;
  j["rejected"] = r.rejected;
  j["errors"] = r.errors;
  j["all_pass"] = r.all_pass;
  return j;
}

inline std::string to_csv(const BatchReport& r) {
  std::string out =
      "id,status,s_a,s_b,rengel_lower,rengel_upper,modulus,required_radius,found_radius,"
      "branch,millis,message\n";
  char buf[512];
  for (const BatchRow& row : r.rows) {
    const std::string mod = row.has_modulus ? std::to_string(row.modulus) : std::string();
    std::snprintf(buf, sizeof(buf), "%s,%s,%.12g,%.12g,%.12g,%.12g,%s,%.12g,%.12g,%s,%.3f,%s\n",
                  row.id.c_str(), to_string(row.status), row.s_a, row.s_b, row.rengel_lower,
                  row.rengel_upper, mod.c_str(), row.required_radius, row.found_radius,
                  row.branch.c_str(), row.millis, row.message.c_str());
    out += buf;
  }
  return out;
}

}  // namespace quadlab
