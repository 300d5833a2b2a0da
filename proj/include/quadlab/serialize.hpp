// JSON serialization for the result types.

#pragma once

#include "disk.hpp"
#include "geodesic.hpp"
#include "json_io.hpp"
#include "modulus.hpp"
#include "rectify.hpp"

namespace quadlab {

inline Json to_json(const GeodesicResult& g) {
  Json j;
  j["length"] = g.length;
  j["path"] = to_json(g.path);
  j["sides"] = Json::array({to_string(g.endpoint_sides.first),
                            to_string(g.endpoint_sides.second)});
  j["endpoints"] = Json::array();
  for (const auto& loc : g.endpoint_locations)
    j["endpoints"].push_back(Json{{"edge", loc.edge}, {"t", loc.t}});
  return j;
}

inline Json to_json(const ModulusResult& m) {
  Json j;
  j["modulus"] = m.modulus;
  j["energy"] = m.energy;
  j["levels"] = Json::array();
  for (const auto& [h, mh] : m.levels)
    j["levels"].push_back(Json{{"h", h}, {"modulus", mh}});
  j["extrapolated"] = m.extrapolated;
  j["error_estimate"] = m.error_estimate;
  j["fitted_order"] = m.fitted_order;
  j["iterations"] = m.iterations;
  return j;
}

inline Json to_json(const RectifiedQuad& r) {
  Json j;
  j["quad"] = to_json(r.quad);
  j["s"] = r.s_used;
  j["origin"] = to_json(r.origin_used);
  j["s_a_q"] = r.s_a_q;
  j["s_b_q"] = r.s_b_q;
  j["s_a_tau"] = r.s_a_t;
  j["s_b_tau"] = r.s_b_t;
  j["deviation_a"] = r.dev_a;
  j["deviation_b"] = r.dev_b;
  j["achieved_tau"] = r.achieved_tau;
  j["ratio_q"] = r.ratio_q;
  j["ratio_tau"] = r.ratio_qt;
  j["l_tau"] = r.l_tau;
  j["ratio_within"] = r.ratio_within;
  return j;
}

inline const char* to_string(DiskCandidate::Provenance p) {
  switch (p) {
    case DiskCandidate::Provenance::tangent_construction: return "tangent_construction";
    case DiskCandidate::Provenance::seven_arc: return "seven_arc";
    case DiskCandidate::Provenance::global_search: return "global_search";
  }
  return "?";
}

inline Json to_json(const DiskCandidate& d) {
  return Json{{"center", to_json(d.center)},
              {"radius", d.radius},
              {"provenance", to_string(d.provenance)}};
}

inline Json to_json(const PipelineTrace& t) {
  Json j;
  j["w0"] = to_json(t.w0);
  j["w0_arclength"] = t.w0_arclen;
  j["exits_ok"] = t.exits_ok;
  j["split_ok"] = t.split_ok;
  j["good_region"] = t.good_region;
  j["bad_side_has_boundary"] = t.bad_side_has_boundary;
  j["hugged_half"] = t.hugged_half;
  j["branch"] = t.branch;
  j["fallback_reason"] = t.fallback_reason;
  j["nudged"] = t.nudged;
  j["epsilon"] = t.epsilon;
  j["assumption"] = t.assumption;
  return j;
}

inline Json to_json(const TheoremReport& r) {
  Json j;
  j["required_radius"] = r.required_radius;
  j["found"] = to_json(r.found);
  j["pass"] = r.pass;
  j["s_a"] = r.s_a;
  j["s_b"] = r.s_b;
  if (r.K > 0) {
    j["K"] = r.K;
    j["L_tilde"] = r.L_tilde;
    j["delta"] = r.delta;
    if (r.modulus_checked) j["modulus"] = r.modulus;
    j["conjugated"] = r.conjugated;
  }
  j["L"] = r.L;
  j["trace"] = to_json(r.trace);
  return j;
}

}  // namespace quadlab
