#pragma once

// JSON and CSV serialization of ResidueReport. Key order is fixed and floats
// round-trip exactly, so identical runs produce byte-identical files.

#include <fstream>
#include <string>

#include <json.hpp>

#include "warpres/wres.hpp"

namespace warpres {

using OrderedJson = nlohmann::ordered_json;

inline OrderedJson report_to_json(const ResidueReport& rep, bool include_nodes = false) {
  OrderedJson meta;
  meta["m"] = rep.m;
  meta["n"] = rep.n;
  meta["mbar"] = rep.mbar;
  meta["epsilon"] = rep.epsilon;
  meta["warp"] = rep.warp;
  meta["factor_m"] = rep.factor_m;
  meta["factor_n"] = rep.factor_n;
  meta["mode"] = rep.mode;
  meta["grid_m"] = rep.grid_m;
  meta["grid_n"] = rep.grid_n;
  meta["deriv_mode"] = rep.deriv_mode;
  meta["verify_tolerance"] = rep.verify_tolerance;
  meta["normalization"] = rep.normalization;
  meta["trace"] = rep.trace;

  OrderedJson totals;
  totals["volume"] = rep.volume;
  if (std::isfinite(rep.total_assembled)) totals["wres_assembled"] = rep.total_assembled;
  if (std::isfinite(rep.total_closed)) totals["wres_closed"] = rep.total_closed;
  if (std::isfinite(rep.total_abs_gap)) {
    totals["abs_gap"] = rep.total_abs_gap;
    totals["rel_gap"] = rep.total_rel_gap;
    totals["max_node_rel_gap"] = rep.max_node_rel_gap;
    totals["verify_pass"] = rep.verify_pass;
  }

  OrderedJson j;
  j["metadata"] = meta;
  j["totals"] = totals;

  if (rep.has_reference_check) {
    OrderedJson ref;
    ref["quoted_total"] = rep.reference_quoted_total;
    ref["engine_closed_total"] = rep.total_closed;
    ref["ratio"] = rep.reference_ratio;
    ref["note"] = rep.reference_note;
    j["reference_check"] = ref;
  }

  if (include_nodes && !rep.nodes.empty()) {
    OrderedJson nodes = OrderedJson::array();
    for (const auto& rec : rep.nodes) {
      OrderedJson u;
      OrderedJson pt = OrderedJson::array();
      for (int i = 0; i < rec.x.size(); ++i) pt.push_back(rec.x(i));
      u["x"] = pt;
      u["weight"] = rec.weight;
      if (std::isfinite(rec.assembled)) {
        u["terms"] = {rec.terms.t1, rec.terms.t2, rec.terms.t3,
                      rec.terms.t4, rec.terms.t5, rec.terms.t6};
        u["assembled"] = rec.assembled;
      }
      if (std::isfinite(rec.closed)) u["closed"] = rec.closed;
      if (std::isfinite(rec.abs_gap)) {
        u["abs_gap"] = rec.abs_gap;
        u["rel_gap"] = rec.rel_gap;
      }
      nodes.push_back(u);
    }
    j["per_node"] = nodes;
  }
  return j;
}

inline std::string report_to_csv(const ResidueReport& rep) {
  std::string out = "x1,x2,x3,x4,weight,t1,t2,t3,t4,t5,t6,assembled,closed,abs_gap,rel_gap\n";
  char buf[512];
  for (const auto& rec : rep.nodes) {
    std::string row;
    for (int i = 0; i < 4; ++i) {
      if (i < rec.x.size()) {
        std::snprintf(buf, sizeof buf, "%.17g", rec.x(i));
        row += buf;
      }
      row += ",";
    }
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                  rec.weight, rec.terms.t1, rec.terms.t2, rec.terms.t3, rec.terms.t4,
                  rec.terms.t5, rec.terms.t6, rec.assembled, rec.closed, rec.abs_gap,
                  rec.rel_gap);
    row += buf;
    out += row + "\n";
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open output file: " + path);
  os << content;
}

}  // namespace warpres
