#include "hq/barrier.hpp"
#include "hq/config.hpp"
#include "hq/property_suite.hpp"
#include "hq/report.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>

using namespace hq;

namespace {

std::string write_temp(const std::string& body) {
  const std::string path = "hq_test_config.txt";
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("config file parsing") {
  const std::string path = write_temp(
      "# benchmark setup\n"
      "n = 3\n"
      "k = 2\n"
      "l = 1\n"
      "shape = disc\n"
      "size = 0.8\n"
      "m = 17\n"
      "psi = constant:2\n"
      "eps_schedule = 1e-2, 0\n"
      "seed = 7\n");
  const RunConfig cfg = parse_config_file(path);
  CHECK(cfg.op.n == 3);
  CHECK(cfg.op.k == 2);
  CHECK(cfg.op.l == 1);
  CHECK(cfg.dom.shape == Shape::disc);
  CHECK(cfg.dom.size == doctest::Approx(0.8));
  CHECK(cfg.m == 17);
  CHECK(cfg.psi_spec == "constant:2");
  CHECK(cfg.solver.eps_schedule == std::vector<double>{1e-2, 0.0});
  CHECK(cfg.seed == 7);
  std::remove(path.c_str());
}

TEST_CASE("unknown config keys name the key and the documented set") {
  RunConfig cfg;
  try {
    apply_key_value(cfg, "newton_tolerance", "1e-8");
    CHECK(false);
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("newton_tolerance") != std::string::npos);
    CHECK(msg.find("eps_schedule") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_key_value(cfg, "m", "not_a_number"), ConfigError);
  CHECK_THROWS_AS(parse_config_file("definitely_missing.cfg"), ConfigError);
}

TEST_CASE("psi descriptions parse") {
  CHECK(make_psi("constant:2", 1).value(Vec::Zero(2), 0.0, Vec::Zero(3)) ==
        doctest::Approx(2.0));
  const PsiModel bump = make_psi("radial_bump:0.8,0.35", 1);
  CHECK(bump.base((Eigen::VectorXd(2) << 0.1, 0.0).finished(), 0.0,
                  Vec::Zero(3)) == 0.0);
  CHECK_THROWS_AS(make_psi("gaussian:1", 1), ConfigError);
}

TEST_CASE("property suite passes and is deterministic across thread counts") {
  SuiteConfig sc;
  sc.n = 3;
  sc.k = 2;
  sc.l = 1;
  sc.seed = 42;
  sc.samples = 600;
  const SuiteReport one = run_property_suite(sc);
  CHECK(one.pass);
  CHECK(one.worst_slack >= kSuiteSlackFloor);

  sc.threads = 4;
  const SuiteReport four = run_property_suite(sc);
  REQUIRE(one.checks.size() == four.checks.size());
  for (size_t i = 0; i < one.checks.size(); ++i) {
    CHECK(one.checks[i].worst_slack == four.checks[i].worst_slack);
    CHECK(one.checks[i].worst_index == four.checks[i].worst_index);
    CHECK(one.checks[i].worst_sample == four.checks[i].worst_sample);
  }

  // identical seeds give byte-identical reports up to timing
  Json a = to_json(one);
  Json b = to_json(run_property_suite([&] {
    SuiteConfig c = sc;
    c.threads = 1;
    return c;
  }()));
  a.erase("wall_time_sec");
  b.erase("wall_time_sec");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("property suite flags a corrupted sigma order") {
  SuiteConfig sc;
  sc.n = 3;
  sc.k = 2;
  sc.l = 1;
  sc.samples = 200;
  sc.corrupt_sigma = true;
  const SuiteReport rep = run_property_suite(sc);
  CHECK_FALSE(rep.pass);
  bool identity_failed = false;
  for (const auto& c : rep.checks) {
    if (c.name == "partials_sum_identity") {
      identity_failed = !c.pass;
      CHECK(c.worst_index >= 0);
      CHECK(!c.worst_sample.empty());
    }
  }
  CHECK(identity_failed);
}

TEST_CASE("property suite injects the all-ones sample first") {
  SuiteConfig sc;
  sc.n = 4;
  sc.k = 3;
  sc.l = 1;
  sc.samples = 1;  // only the injected all-ones sample runs
  const SuiteReport rep = run_property_suite(sc);
  int exact_zero = 0;
  for (const auto& c : rep.checks) {
    if (c.name == "partials_sum_identity" ||
        c.name == "newton_maclaurin_inequality" ||
        c.name == "eta_ordering_and_positivity" ||
        c.name == "deletion_recursion_identity") {
      CHECK(c.worst_slack == 0.0);  // exact equalities at the symmetric point
      CHECK(c.worst_index == 0);
      ++exact_zero;
    }
  }
  CHECK(exact_zero == 4);
  CHECK(rep.pass);
}

TEST_CASE("property suite rejects bad configs") {
  SuiteConfig sc;
  sc.k = 0;
  CHECK_THROWS_AS(run_property_suite(sc), ConfigError);
}

TEST_CASE("barrier parameter search and checks") {
  for (const auto [n, k, l] : {std::tuple{2, 1, 0}, {3, 2, 1}}) {
    const BarrierParams p = search_barrier_params(n, k, 1.0);
    CHECK(p.theta > 0.0);
    CHECK(p.K > 0.0);
    CHECK(p.eta0 > 0.0);
    CHECK(p.delta > 0.0);
    const BarrierReport rep = barrier_check(n, k, l, 1.0, p, 9, 8);
    CHECK(rep.pass);
    CHECK(rep.worst() >= -1e-9);
  }
}

TEST_CASE("barrier rejects an infeasible theta") {
  BarrierParams p = search_barrier_params(2, 1, 1.0);
  p.theta = 1.0;  // kappa_b itself: kappa_b - 3 theta < 0 kills the cone
  CHECK_THROWS_AS(barrier_check(2, 1, 0, 1.0, p, 9, 4), ConfigError);
}

TEST_CASE("oversized delta is reported as a bound violation, not a crash") {
  BarrierParams p = search_barrier_params(2, 1, 1.0);
  p.delta = 0.95;  // nearly the whole radius
  const BarrierReport rep = barrier_check(2, 1, 0, 1.0, p, 9, 4);
  CHECK_FALSE(rep.pass);
  CHECK(rep.worst() < 0.0);
}

TEST_CASE("barrier function evaluators") {
  const Vec xp = (Eigen::VectorXd(1) << 0.1).finished();
  const double R = 1.0;
  CHECK(collar_rho(Vec::Zero(1), R) == 0.0);
  CHECK(collar_rho(xp, R) == doctest::Approx(1.0 - std::sqrt(1.0 - 0.01)));
  CHECK(collar_rho_grad(xp, R)[0] ==
        doctest::Approx(0.1 / std::sqrt(0.99)));
  CHECK(collar_distance(Vec::Zero(1), 0.0, R) == doctest::Approx(0.0));
  CHECK(collar_distance(Vec::Zero(1), 0.2, R) == doctest::Approx(0.2));

  // W and its exponential rescaling
  const Vec du = (Eigen::VectorXd(2) << 0.3, -0.2).finished();
  const Vec rg = (Eigen::VectorXd(1) << 0.05).finished();
  const double w = tangential_w(du, rg, 0);
  CHECK(w == doctest::Approx(0.3 + 0.05 * (-0.2) - 0.5 * 0.09));
  CHECK(wtilde(0.0, 2.0) == 0.0);
  CHECK(wtilde(0.3, 2.0) == doctest::Approx(1.0 - std::exp(-0.6)));
  CHECK(wtilde(0.3, 2.0) > wtilde(0.1, 2.0));

  // Psi and Phi assembly
  const double psi = barrier_psi(-0.05, 0.01, 0.02, 1.0);
  CHECK(psi == doctest::Approx(-0.05 - 0.0002 + 0.00005));
  CHECK(barrier_phi(10.0, psi, 0.2) == doctest::Approx(10.0 * psi - 0.2));
}

TEST_CASE("monitor table aggregates stages and refinements") {
  Json rep1, rep2;
  for (auto* rep : {&rep1, &rep2}) {
    (*rep)["m"] = rep == &rep1 ? 17 : 33;
    (*rep)["stages"] = Json::array();
    for (double eps : {1e-2, 0.0}) {
      Json st;
      st["eps"] = eps;
      st["converged"] = true;
      const double scale = (rep == &rep1) ? 1.0 : 0.25;
      st["norms"] = {
          {"all", {{"sup_u", 0.1}, {"sup_du", 0.2}, {"sup_d2u", scale}}},
          {"interior", {{"sup_u", 0.1}, {"sup_du", 0.2}, {"sup_d2u", scale}}},
          {"boundary_band", {{"sup_u", 0.1}, {"sup_du", 0.2}, {"sup_d2u", scale}}}};
      (*rep)["stages"].push_back(st);
    }
  }
  const Json table = monitor_table({rep1, rep2});
  CHECK(table["rows"].size() == 4);
  REQUIRE(table["refinement"].size() == 1);
  CHECK(table["refinement"][0]["ratio_sup_d2u"].get<double>() ==
        doctest::Approx(4.0));
}
