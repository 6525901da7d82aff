#include "hq/report.hpp"

#include <fstream>

namespace hq {

Json to_json(const FieldNorms& n) {
  return Json{{"sup_u", n.sup_u}, {"sup_du", n.sup_du}, {"sup_d2u", n.sup_d2u}};
}

Json to_json(const StageReport& s) {
  Json j;
  j["eps"] = s.eps;
  j["converged"] = s.converged;
  j["iterations"] = s.iterations;
  j["final_residual"] = s.final_residual;
  j["residual_history"] = s.residual_history;
  j["failure"] = s.failure;
  j["min_margin"] = s.min_margin;
  j["ordering_vs_subsolution"] = s.ordering_vs_subsolution;
  j["ordering_vs_zero"] = s.ordering_vs_zero;
  j["norms"] = Json{{"all", to_json(s.norms_all)},
                    {"interior", to_json(s.norms_interior)},
                    {"boundary_band", to_json(s.norms_boundary)}};
  return j;
}

Json to_json(const SolveReport& r) {
  Json j;
  j["success"] = r.success;
  j["final_residual"] = r.final_residual;
  j["subsolution_scale"] = r.subsolution_scale;
  j["stages"] = Json::array();
  for (const auto& s : r.stages) j["stages"].push_back(to_json(s));
  j["wall_time_sec"] = r.wall_time_sec;
  return j;
}

Json to_json(const SuiteReport& r) {
  Json j;
  j["n"] = r.cfg.n;
  j["k"] = r.cfg.k;
  j["l"] = r.cfg.l;
  j["seed"] = r.cfg.seed;
  j["samples"] = r.cfg.samples;
  j["pass"] = r.pass;
  j["worst_slack"] = r.worst_slack;
  j["checks"] = Json::array();
  for (const auto& c : r.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["count"] = c.count;
    cj["worst_slack"] = c.worst_slack;
    cj["worst_index"] = c.worst_index;
    cj["worst_sample"] = c.worst_sample;
    if (c.calibrated) cj["calibrated_constant"] = c.calibrated_constant;
    cj["pass"] = c.pass;
    j["checks"].push_back(std::move(cj));
  }
  j["wall_time_sec"] = r.wall_time_sec;
  return j;
}

Json to_json(const BarrierReport& r) {
  Json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["l"] = r.l;
  j["radius"] = r.radius;
  j["params"] = Json{{"theta", r.params.theta}, {"K", r.params.K},
                     {"eta0", r.params.eta0},   {"delta", r.params.delta},
                     {"t", r.params.t},         {"N", r.params.N},
                     {"b", r.params.b},         {"R", r.params.R_mult}};
  j["slack_boundary1"] = r.slack_boundary1;
  j["slack_boundary2"] = r.slack_boundary2;
  j["slack_boundary3"] = r.slack_boundary3;
  j["convexity_margin"] = r.convexity_margin;
  j["projection_cone"] = r.projection_cone;
  j["projection_quotient"] = r.projection_quotient;
  j["psi_side"] = r.psi_side;
  j["collar_nodes"] = r.collar_nodes;
  j["pass"] = r.pass;
  return j;
}

Json monitor_table(const std::vector<Json>& solve_reports) {
  Json table;
  table["rows"] = Json::array();
  for (size_t ri = 0; ri < solve_reports.size(); ++ri) {
    const Json& rep = solve_reports[ri];
    if (!rep.contains("stages")) continue;
    const auto& stages = rep["stages"];
    for (size_t si = 0; si < stages.size(); ++si) {
      const Json& st = stages[si];
      if (!st.value("converged", false)) continue;
      Json row;
      row["report"] = ri;
      row["m"] = rep.value("m", 0);
      row["eps"] = st["eps"];
      row["sup_u"] = st["norms"]["all"]["sup_u"];
      row["sup_du"] = st["norms"]["all"]["sup_du"];
      row["sup_d2u"] = st["norms"]["all"]["sup_d2u"];
      row["interior_sup_d2u"] = st["norms"]["interior"]["sup_d2u"];
      row["boundary_sup_d2u"] = st["norms"]["boundary_band"]["sup_d2u"];
      if (si > 0 && stages[si - 1].value("converged", false)) {
        const double prev =
            stages[si - 1]["norms"]["interior"]["sup_d2u"].get<double>();
        const double cur = st["norms"]["interior"]["sup_d2u"].get<double>();
        if (prev > 0.0) row["stage_ratio_interior_sup_d2u"] = cur / prev;
      }
      table["rows"].push_back(std::move(row));
    }
  }
  // refinement ratios between consecutive reports at the final stage
  table["refinement"] = Json::array();
  for (size_t ri = 0; ri + 1 < solve_reports.size(); ++ri) {
    const Json &a = solve_reports[ri], &b = solve_reports[ri + 1];
    if (!a.contains("stages") || !b.contains("stages")) continue;
    if (a["stages"].empty() || b["stages"].empty()) continue;
    const Json& sa = a["stages"].back();
    const Json& sb = b["stages"].back();
    if (!sa.value("converged", false) || !sb.value("converged", false)) continue;
    Json row;
    row["m_coarse"] = a.value("m", 0);
    row["m_fine"] = b.value("m", 0);
    for (const char* key : {"sup_u", "sup_du", "sup_d2u"}) {
      const double va = sa["norms"]["all"][key].get<double>();
      const double vb = sb["norms"]["all"][key].get<double>();
      if (vb > 0.0) row[std::string("ratio_") + key] = va / vb;
    }
    table["refinement"].push_back(std::move(row));
  }
  return table;
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

void write_field_csv_file(const Field& f, int k, int l,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  dump_field_csv(f, k, l, out);
}

}  // namespace hq
