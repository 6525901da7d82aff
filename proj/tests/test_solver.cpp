#include "hq/solver.hpp"

#include "hq/exact_fields.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace hq;
using namespace hq::testing;

namespace {

SolverConfig quick_config() {
  SolverConfig cfg;
  cfg.eps_schedule = {1e-2, 0.0};
  return cfg;
}

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  cfg.eps_schedule = {1e-2, 1e-2};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.eps_schedule = {1e-2, -1.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.eps_schedule = {};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("builtin subsolution satisfies the discrete inequality") {
  const DomainSpec dom{Shape::disc, 1.0, 2};
  const OperatorSpec spec{2, 1, 0};
  auto grid = std::make_shared<const Grid>(build_grid(dom, 33));
  const PsiModel psi = PsiModel::constant(1.0, spec.power());

  double scale = 0.0;
  const Field sub = builtin_subsolution(grid, spec, psi, &scale);
  CHECK(scale > 0.0);
  const SweepResult sw = residual_sweep(sub, spec, psi, kConeTol);
  CHECK(sw.admissible);
  CHECK(sw.residual.minCoeff() >= 0.0);
}

TEST_CASE("builtin subsolution with zero psi picks a minimal scale") {
  const DomainSpec dom{Shape::disc, 1.0, 2};
  const OperatorSpec spec{2, 1, 0};
  auto grid = std::make_shared<const Grid>(build_grid(dom, 17));
  const PsiModel psi = PsiModel::constant(0.0, spec.power());
  double scale = 0.0;
  const Field sub = builtin_subsolution(grid, spec, psi, &scale);
  CHECK(scale <= 2e-4);  // the scan floor is admissible already
  CHECK(residual_sweep(sub, spec, psi, kConeTol).admissible);
}

TEST_CASE("builtin subsolution fails loudly for oversized psi") {
  const DomainSpec dom{Shape::disc, 1.0, 2};
  const OperatorSpec spec{2, 1, 0};
  auto grid = std::make_shared<const Grid>(build_grid(dom, 17));
  const PsiModel psi = PsiModel::constant(1e9, spec.power());
  CHECK_THROWS_WITH_AS(builtin_subsolution(grid, spec, psi, nullptr),
                       doctest::Contains("no admissible subsolution"),
                       std::runtime_error);
}

TEST_CASE("builtin subsolution works on the square") {
  const DomainSpec dom{Shape::square, 0.7, 2};
  const OperatorSpec spec{2, 1, 0};
  auto grid = std::make_shared<const Grid>(build_grid(dom, 17));
  const PsiModel psi = PsiModel::constant(0.5, spec.power());
  const Field sub = builtin_subsolution(grid, spec, psi, nullptr);
  const SweepResult sw = residual_sweep(sub, spec, psi, kConeTol);
  CHECK(sw.admissible);
  CHECK(sw.residual.minCoeff() >= 0.0);
}

TEST_CASE("newton stage is a no-op at a discrete fixed point") {
  // psi tabulated from the discrete jets of the sampled exact solution, so
  // the sampled field solves the discrete equation exactly
  const DomainSpec dom{Shape::disc, 0.8, 2};
  const OperatorSpec spec{2, 1, 0};
  auto grid = std::make_shared<const Grid>(build_grid(dom, 17));
  const ExactField cap = cap_field(1.0, 0.8);
  Field u = sample_field(grid, cap.value);

  std::vector<double> table(static_cast<size_t>(grid->num_lattice()), 0.0);
  for (int id = 0; id < grid->num_interior(); ++id) {
    const int lin = grid->interior_node(id);
    table[static_cast<size_t>(lin)] =
        g_value(jet_at(u, lin).d2u, jet_at(u, lin).du, spec);
  }
  const PsiModel psi = PsiModel::from_table(*grid, std::move(table), spec.power());

  SolverConfig cfg;
  const StageReport rep = newton_stage(u, spec, psi, cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);
  CHECK(rep.final_residual < cfg.newton_tol);
}

TEST_CASE("cap benchmark converges at second order") {
  const DomainSpec dom{Shape::disc, 0.8, 2};
  const OperatorSpec spec{2, 1, 0};
  const PsiModel psi = PsiModel::constant(2.0, spec.power());
  const ExactField cap = cap_field(1.0, 0.8);
  const ExactField sub_cap = cap_field(0.9, 0.8);

  auto run = [&](int m) {
    auto grid = std::make_shared<const Grid>(build_grid(dom, m));
    const Field sub = sample_field(grid, sub_cap.value);
    const SolveReport rep = solve(dom, m, spec, psi, quick_config(), &sub);
    REQUIRE(rep.success);
    CHECK(rep.final_residual < 1e-8);
    double err = 0.0;
    for (int id = 0; id < grid->num_interior(); ++id) {
      const int lin = grid->interior_node(id);
      err = std::max(err, std::abs(rep.final_field.values[lin] -
                                   cap.value(grid->coord(lin))));
    }
    return std::pair{rep, err};
  };
  const auto [rep17, e17] = run(17);
  const auto [rep33, e33] = run(33);
  CHECK(e17 / e33 > 3.0);
  CHECK(e17 / e33 < 5.0);
  CHECK(e33 < 1e-3);

  // quadratic tail of the damped Newton iteration at fixed epsilon
  const auto& hist = rep33.stages.front().residual_history;
  REQUIRE(hist.size() >= 3);
  const double r_prev = hist[hist.size() - 2];
  const double r_last = hist.back();
  CHECK(r_last / (r_prev * r_prev) < 100.0);

  // ordering and admissibility invariants
  for (const auto& st : rep33.stages) {
    CHECK(st.ordering_vs_subsolution <= 1e-10);
    CHECK(st.ordering_vs_zero <= 1e-10);
    CHECK(st.min_margin > 0.0);
  }
}

TEST_CASE("reported residual matches recomputation and reruns bit-stably") {
  const DomainSpec dom{Shape::disc, 1.0, 2};
  const OperatorSpec spec{2, 1, 0};
  const PsiModel psi = PsiModel::constant(1.0, spec.power());

  const SolveReport a = solve(dom, 17, spec, psi, quick_config());
  const SolveReport b = solve(dom, 17, spec, psi, quick_config());
  REQUIRE(a.success);
  CHECK((a.final_field.values - b.final_field.values).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(a.final_residual == b.final_residual);

  const PsiModel psi_last = regularize(psi, a.stages.back().eps);
  const SweepResult sw =
      residual_sweep(a.final_field, spec, psi_last, kConeTol);
  CHECK(std::abs(sw.sup - a.final_residual) <= 1e-12);
}

TEST_CASE("two admissible starts reach the same solution") {
  const DomainSpec dom{Shape::disc, 1.0, 2};
  const OperatorSpec spec{2, 1, 0};
  const PsiModel psi = PsiModel::constant(1.0, spec.power());
  const SolverConfig cfg = quick_config();

  const SolveReport from_builtin = solve(dom, 17, spec, psi, cfg);
  REQUIRE(from_builtin.success);

  Field blend = from_builtin.subsolution;
  blend.values *= 0.5;
  const SweepResult sw = residual_sweep(blend, spec, regularize(psi, 1e-2),
                                        kConeTol);
  REQUIRE(sw.admissible);  // the half-blend is still admissible here
  // feed it as a user start; it is not a subsolution, so bypass the check
  // by solving a fresh problem stage by stage
  Field u = blend;
  StageReport s1 = newton_stage(u, spec, regularize(psi, 1e-2), cfg);
  REQUIRE(s1.converged);
  StageReport s2 = newton_stage(u, spec, regularize(psi, 0.0), cfg);
  REQUIRE(s2.converged);

  const double diff =
      (u.values - from_builtin.final_field.values).cwiseAbs().maxCoeff();
  CHECK(diff <= 10.0 * cfg.newton_tol);
}

TEST_CASE("solve with a normal-dependent right-hand side") {
  const DomainSpec dom{Shape::disc, 1.0, 2};
  const OperatorSpec spec{2, 1, 0};
  const PsiModel psi = PsiModel::normal_dependent(0.4, 0.3, 0.2, spec.power());
  const SolveReport rep = solve(dom, 17, spec, psi, quick_config());
  CHECK(rep.success);
  CHECK(rep.final_residual < 1e-8);
  const PsiModel psi0 = regularize(psi, 0.0);
  const SweepResult sw = residual_sweep(rep.final_field, spec, psi0, kConeTol);
  CHECK(std::abs(sw.sup - rep.final_residual) <= 1e-12);
}

TEST_CASE("user subsolution is validated") {
  const DomainSpec dom{Shape::disc, 0.8, 2};
  const OperatorSpec spec{2, 1, 0};
  const PsiModel psi = PsiModel::constant(2.0, spec.power());
  auto grid = std::make_shared<const Grid>(build_grid(dom, 17));

  Field bad = sample_field(grid, [](const Vec& x) {
    return 0.2 * (x.squaredNorm() - 0.64);  // admissible but H < 2
  });
  CHECK_THROWS_WITH_AS(solve(dom, 17, spec, psi, quick_config(), &bad),
                       doctest::Contains("subsolution"), std::runtime_error);
}

TEST_CASE("square domains solve end to end") {
  {
    const DomainSpec dom{Shape::square, 0.7, 2};
    const OperatorSpec spec{2, 1, 0};
    const PsiModel psi = PsiModel::constant(0.5, spec.power());
    const SolveReport rep = solve(dom, 17, spec, psi, quick_config());
    CHECK(rep.success);
    CHECK(rep.final_residual < 1e-8);
    CHECK(rep.stages.back().ordering_vs_zero <= 1e-10);
  }
  {
    const DomainSpec dom{Shape::square, 0.7, 3};
    const OperatorSpec spec{3, 2, 1};
    const PsiModel psi = PsiModel::constant(0.4, spec.power());
    const SolveReport rep = solve(dom, 13, spec, psi, quick_config());
    CHECK(rep.success);
    CHECK(rep.final_residual < 1e-8);
  }
}

TEST_CASE("zero right-hand side drives the solution to zero") {
  const DomainSpec dom{Shape::disc, 1.0, 2};
  const OperatorSpec spec{2, 1, 0};
  const PsiModel psi = PsiModel::constant(0.0, spec.power());
  SolverConfig cfg;  // full default schedule down to 1e-6 and the 0 attempt
  const SolveReport rep = solve(dom, 17, spec, psi, cfg);
  CHECK(rep.success);
  double sup = 0.0;
  for (int id = 0; id < rep.final_field.grid->num_interior(); ++id) {
    const int lin = rep.final_field.grid->interior_node(id);
    sup = std::max(sup, std::abs(rep.final_field.values[lin]));
  }
  CHECK(sup < 1e-5);
}

TEST_CASE("assembly is identical across thread counts") {
  const DomainSpec dom{Shape::disc, 1.0, 2};
  const OperatorSpec spec{2, 1, 0};
  const PsiModel psi = PsiModel::constant(1.0, spec.power());
  SolverConfig one = quick_config();
  SolverConfig four = quick_config();
  four.threads = 4;
  const SolveReport a = solve(dom, 17, spec, psi, one);
  const SolveReport b = solve(dom, 17, spec, psi, four);
  REQUIRE(a.success);
  REQUIRE(b.success);
  CHECK((a.final_field.values - b.final_field.values).cwiseAbs().maxCoeff() <=
        1e-13);
}

TEST_CASE("partial reports survive an unreachable stage") {
  // huge psi at the first stage cannot be matched by any subsolution, but a
  // reachable first stage followed by an overly tight schedule still yields
  // a partial report: force a failure by bounding the iteration count
  const DomainSpec dom{Shape::disc, 1.0, 2};
  const OperatorSpec spec{2, 1, 0};
  const PsiModel psi = PsiModel::constant(1.0, spec.power());
  SolverConfig cfg = quick_config();
  cfg.max_iters = 1;  // cannot reach 1e-8 in one step from the subsolution
  const SolveReport rep = solve(dom, 17, spec, psi, cfg);
  CHECK_FALSE(rep.success);
  CHECK_FALSE(rep.stages.empty());
  CHECK_FALSE(rep.stages.front().converged);
  CHECK(rep.stages.front().failure == "max iterations reached");
}
