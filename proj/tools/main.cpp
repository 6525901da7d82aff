#include "hq/config.hpp"
#include "hq/exact_fields.hpp"
#include "hq/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

using namespace hq;

struct CliOverrides {
  std::string config_path;
  std::vector<std::string> kv;  // key=value pairs collected from flags
  std::vector<std::string> reports;
};

RunConfig load_config(const CliOverrides& ov, const std::string& command) {
  RunConfig cfg;
  if (!ov.config_path.empty()) cfg = parse_config_file(ov.config_path);
  for (const auto& pair : ov.kv) {
    const auto eq = pair.find('=');
    apply_key_value(cfg, pair.substr(0, eq), pair.substr(eq + 1));
  }
  cfg.command = command;
  cfg.solver.threads = cfg.threads;
  return cfg;
}

void add_common(CLI::App* cmd, CliOverrides& ov) {
  cmd->add_option("--config", ov.config_path, "flat key = value config file");
  auto kv = [&ov](const std::string& key) {
    return [&ov, key](const std::string& v) { ov.kv.push_back(key + "=" + v); };
  };
  cmd->add_option_function<std::string>("--seed", kv("seed"), "sampling seed");
  cmd->add_option_function<std::string>("--out", kv("out"), "output directory");
  cmd->add_option_function<std::string>("--threads", kv("threads"), "worker threads");
  cmd->add_option_function<std::string>("--n", kv("n"), "spatial dimension");
  cmd->add_option_function<std::string>("--k", kv("k"), "upper symmetric order");
  cmd->add_option_function<std::string>("--l", kv("l"), "lower symmetric order");
  cmd->add_option_function<std::string>("--m", kv("m"), "nodes per axis");
  cmd->add_option_function<std::string>("--size", kv("size"), "domain half-width/radius");
  cmd->add_option_function<std::string>("--shape", kv("shape"), "square or disc");
  cmd->add_option_function<std::string>("--eps-schedule", kv("eps_schedule"),
                                        "comma list of regularization levels");
  cmd->add_option_function<std::string>("--psi", kv("psi"), "KIND:params");
  cmd->add_option_function<std::string>("--samples", kv("sample_count"),
                                        "property-suite samples per stream");
  cmd->add_option_function<std::string>("--exact", kv("exact"),
                                        "manufactured exact field (cap, quartic)");
  cmd->add_option_function<std::string>("--subsolution", kv("subsolution"),
                                        "builtin or cap:R");
  cmd->add_option_function<std::string>("--m-list", kv("m_list"),
                                        "comma list of grid sizes");
}

Json config_header(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["n"] = cfg.op.n;
  j["k"] = cfg.op.k;
  j["l"] = cfg.op.l;
  j["shape"] = cfg.dom.shape == Shape::disc ? "disc" : "square";
  j["size"] = cfg.dom.size;
  j["m"] = cfg.m;
  j["psi"] = cfg.psi_spec;
  j["eps_schedule"] = cfg.solver.eps_schedule;
  j["newton_tol"] = cfg.solver.newton_tol;
  j["max_iters"] = cfg.solver.max_iters;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  return j;
}

std::filesystem::path out_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

bool make_user_subsolution(const RunConfig& cfg, int m, Field& out) {
  if (cfg.subsolution == "builtin") return false;
  if (cfg.subsolution.rfind("cap:", 0) != 0) {
    throw ConfigError("subsolution must be 'builtin' or 'cap:R'");
  }
  const double R = std::stod(cfg.subsolution.substr(4));
  const ExactField cap = cap_field(R, cfg.dom.size);
  auto grid = std::make_shared<const Grid>(build_grid(cfg.dom, m));
  out = sample_field(grid, cap.value);
  return true;
}

int run_solve(const RunConfig& cfg) {
  cfg.op.validate();
  const PsiModel psi = make_psi(cfg.psi_spec, cfg.op.power());

  Field user_sub;
  const Field* user_sub_ptr =
      make_user_subsolution(cfg, cfg.m, user_sub) ? &user_sub : nullptr;

  const SolveReport rep =
      solve(cfg.dom, cfg.m, cfg.op, psi, cfg.solver, user_sub_ptr);

  Json j = config_header(cfg);
  j["subsolution"] = cfg.subsolution;
  j.update(to_json(rep));
  const auto dir = out_dir(cfg);
  write_json_file(j, (dir / "report.json").string());
  write_field_csv_file(rep.final_field, cfg.op.k, cfg.op.l,
                       (dir / "field_final.csv").string());
  write_field_csv_file(rep.subsolution, cfg.op.k, cfg.op.l,
                       (dir / "field_subsolution.csv").string());

  std::cout << (rep.success ? "solve: converged" : "solve: FAILED")
            << ", final residual " << rep.final_residual << ", stages "
            << rep.stages.size() << ", report " << (dir / "report.json").string()
            << "\n";
  return rep.success ? 0 : 1;
}

int run_verify_props(const RunConfig& cfg) {
  SuiteConfig sc;
  sc.n = cfg.op.n;
  sc.k = cfg.op.k;
  sc.l = cfg.op.l;
  sc.seed = cfg.seed;
  sc.samples = cfg.sample_count;
  sc.threads = cfg.threads;
  const SuiteReport rep = run_property_suite(sc);

  for (const auto& c : rep.checks) {
    std::cout << (c.pass ? "  ok   " : "  FAIL ") << c.name << "  worst "
              << c.worst_slack;
    if (c.calibrated) std::cout << "  calibrated " << c.calibrated_constant;
    if (!c.pass) {
      std::cout << "  at sample " << c.worst_index << " " << c.worst_sample;
    }
    std::cout << "\n";
  }
  std::cout << (rep.pass ? "verify-props: pass" : "verify-props: FAIL")
            << " (worst slack " << rep.worst_slack << ", " << rep.wall_time_sec
            << " s)\n";

  Json j = config_header(cfg);
  j["samples"] = cfg.sample_count;
  j.update(to_json(rep));
  write_json_file(j, (out_dir(cfg) / "report.json").string());
  return rep.pass ? 0 : 1;
}

int run_barrier_check(const RunConfig& cfg) {
  if (cfg.dom.shape != Shape::disc) {
    throw ConfigError("barrier-check requires a disc domain");
  }
  BarrierParams params = cfg.barrier;
  if (!cfg.barrier_given) {
    params = search_barrier_params(cfg.op.n, cfg.op.k, cfg.dom.size);
  } else {
    if (params.t == 0.0) params.t = 1.0;
    if (params.N == 0.0) params.N = 1.0;
  }
  const BarrierReport rep = barrier_check(cfg.op.n, cfg.op.k, cfg.op.l,
                                          cfg.dom.size, params, 17, 16, cfg.seed);
  std::cout << "barrier-check: theta=" << rep.params.theta
            << " K=" << rep.params.K << " eta0=" << rep.params.eta0
            << " delta=" << rep.params.delta << "\n"
            << "  boundary slacks " << rep.slack_boundary1 << ", "
            << rep.slack_boundary2 << ", " << rep.slack_boundary3 << "\n"
            << "  convexity margin " << rep.convexity_margin
            << ", projection " << rep.projection_cone << " / "
            << rep.projection_quotient << ", psi side " << rep.psi_side << "\n"
            << (rep.pass ? "barrier-check: pass" : "barrier-check: FAIL")
            << "\n";
  Json j = config_header(cfg);
  j.update(to_json(rep));
  write_json_file(j, (out_dir(cfg) / "report.json").string());
  return rep.pass ? 0 : 1;
}

int run_manufactured(const RunConfig& cfg) {
  cfg.op.validate();
  const ExactField exact = make_exact_field(cfg.exact, cfg.dom.size);
  std::vector<int> ms = cfg.m_list.empty() ? std::vector<int>{cfg.m} : cfg.m_list;

  Json j = config_header(cfg);
  j["exact"] = cfg.exact;
  j["runs"] = Json::array();
  const auto dir = out_dir(cfg);

  bool ok = true;
  std::vector<double> errors;
  for (int m : ms) {
    auto grid = std::make_shared<const Grid>(build_grid(cfg.dom, m));
    const PsiModel psi = manufactured_rhs(exact, cfg.op, *grid);
    Field user_sub;
    const Field* user_sub_ptr =
        make_user_subsolution(cfg, m, user_sub) ? &user_sub : nullptr;
    const SolveReport rep = solve(cfg.dom, m, cfg.op, psi, cfg.solver, user_sub_ptr);
    double err = 0.0;
    for (int id = 0; id < grid->num_interior(); ++id) {
      const int lin = grid->interior_node(id);
      err = std::max(err, std::abs(rep.final_field.values[lin] -
                                   exact.value(grid->coord(lin))));
    }
    errors.push_back(err);
    ok = ok && rep.success;
    Json run = to_json(rep);
    run["m"] = m;
    run["sup_error"] = err;
    j["runs"].push_back(std::move(run));
    write_field_csv_file(rep.final_field, cfg.op.k, cfg.op.l,
                         (dir / ("field_m" + std::to_string(m) + ".csv")).string());
    std::cout << "manufactured " << cfg.exact << " m=" << m << ": "
              << (rep.success ? "converged" : "FAILED") << ", sup error " << err
              << "\n";
  }
  j["error_ratios"] = Json::array();
  for (size_t i = 0; i + 1 < errors.size(); ++i) {
    const double ratio = errors[i] / errors[i + 1];
    j["error_ratios"].push_back(ratio);
    std::cout << "  refinement ratio m=" << ms[i] << "->" << ms[i + 1] << ": "
              << ratio << "\n";
  }
  write_json_file(j, (dir / "report.json").string());
  return ok ? 0 : 1;
}

int run_monitor(const RunConfig& cfg, const std::vector<std::string>& paths) {
  if (paths.empty()) throw ConfigError("monitor: give at least one --report");
  std::vector<Json> reports;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw ConfigError("monitor: cannot open '" + p + "'");
    reports.push_back(Json::parse(in));
  }
  const Json table = monitor_table(reports);
  std::cout << "eps        sup|u|      sup|Du|     sup|D2u|    interior|D2u| boundary|D2u|\n";
  for (const auto& row : table["rows"]) {
    std::printf("%-10.3g %-11.5g %-11.5g %-11.5g %-13.5g %-12.5g\n",
                row["eps"].get<double>(), row["sup_u"].get<double>(),
                row["sup_du"].get<double>(), row["sup_d2u"].get<double>(),
                row["interior_sup_d2u"].get<double>(),
                row["boundary_sup_d2u"].get<double>());
  }
  for (const auto& row : table["refinement"]) {
    std::cout << "refinement m=" << row["m_coarse"] << "->" << row["m_fine"];
    if (row.contains("ratio_sup_u")) {
      std::cout << " sup_u ratio " << row["ratio_sup_u"].get<double>();
    }
    std::cout << "\n";
  }
  write_json_file(table, (out_dir(cfg) / "monitor.json").string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet solver and verification harness for Hessian-quotient "
               "curvature equations on graph hypersurfaces"};
  app.require_subcommand(1);

  CliOverrides ov_solve, ov_props, ov_barrier, ov_manu, ov_monitor;
  auto* c_solve = app.add_subcommand("solve", "solve the Dirichlet problem");
  add_common(c_solve, ov_solve);
  auto* c_props = app.add_subcommand("verify-props",
                                     "run the algebraic property suite");
  add_common(c_props, ov_props);
  auto* c_barrier = app.add_subcommand("barrier-check",
                                       "verify the boundary barrier bounds");
  add_common(c_barrier, ov_barrier);
  auto* c_manu = app.add_subcommand(
      "manufactured", "solve against a manufactured exact solution");
  add_common(c_manu, ov_manu);
  auto* c_monitor =
      app.add_subcommand("monitor", "tabulate estimate monitors from reports");
  add_common(c_monitor, ov_monitor);
  c_monitor->add_option("--report", ov_monitor.reports,
                        "solve report.json path (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (c_solve->parsed()) return run_solve(load_config(ov_solve, "solve"));
    if (c_props->parsed()) {
      return run_verify_props(load_config(ov_props, "verify-props"));
    }
    if (c_barrier->parsed()) {
      return run_barrier_check(load_config(ov_barrier, "barrier-check"));
    }
    if (c_manu->parsed()) {
      return run_manufactured(load_config(ov_manu, "manufactured"));
    }
    if (c_monitor->parsed()) {
      return run_monitor(load_config(ov_monitor, "monitor"), ov_monitor.reports);
    }
  } catch (const hq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
