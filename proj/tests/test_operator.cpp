#include "hq/pde_operator.hpp"

#include "hq/sampling.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace hq;
using namespace hq::testing;

TEST_CASE("residual vanishes on exact sphere data") {
  Rng rng(3);
  {
    const OperatorSpec spec{2, 1, 0};
    const double R = 1.0;
    const ExactField cap = cap_field(R, 0.8);
    const PsiModel psi = PsiModel::constant(2.0 / R, spec.power());
    for (int rep = 0; rep < 40; ++rep) {
      const Vec x = sample_ball(rng, 2, 0.75);
      CHECK(std::abs(residual(cap.jet(x), spec, psi)) < 1e-10);
    }
  }
  {
    const OperatorSpec spec{3, 2, 1};
    const double R = 1.1;
    const ExactField cap = cap_field(R, 0.8);
    const PsiModel psi = PsiModel::constant(2.0 / R, spec.power());
    for (int rep = 0; rep < 40; ++rep) {
      const Vec x = sample_ball(rng, 3, 0.75);
      CHECK(std::abs(residual(cap.jet(x), spec, psi)) < 1e-10);
    }
  }
}

TEST_CASE("residual vanishes for the paraboloid closed form") {
  for (const auto [n, k, l] : {std::tuple{3, 2, 1}, {3, 2, 0}, {4, 3, 1}}) {
    const OperatorSpec spec{n, k, l};
    const double a = 0.8;
    GraphJet jet{Vec::Zero(n), 0.0, Vec::Zero(n), a * Mat::Identity(n, n)};
    const double expected = binomial(n, k) / binomial(n, l) *
                            std::pow((n - 1) * a, k - l);
    const PsiModel psi = PsiModel::constant(expected, spec.power());
    CHECK(std::abs(residual(jet, spec, psi)) < 1e-10);
  }
}

TEST_CASE("residual throws with margin on inadmissible jets") {
  const OperatorSpec spec{3, 2, 1};
  GraphJet jet{Vec::Zero(3), 0.0, Vec::Zero(3), -Mat::Identity(3, 3)};
  const PsiModel psi = PsiModel::constant(1.0, spec.power());
  try {
    residual(jet, spec, psi);
    CHECK(false);
  } catch (const ConeViolation& e) {
    CHECK(e.margin() < 0.0);
  }
}

TEST_CASE("linearization matches finite differences") {
  Rng rng(5);
  for (const auto [n, k, l] : {std::tuple{2, 1, 0}, {3, 2, 1}, {3, 2, 0}}) {
    const OperatorSpec spec{n, k, l};
    const PsiModel psi = PsiModel::constant(0.0, spec.power());
    double worst = 0.0;
    for (int rep = 0; rep < 80; ++rep) {
      const GraphJet jet = (rep % 5 == 0)
                               ? repeated_eigenvalue_jet(rng, n, k)
                               : random_admissible_jet(rng, n, k);
      const LinearizationData lin = linearize(jet, spec, psi);
      const double h = 1e-5;
      for (int s = 0; s < n; ++s) {
        Vec dp = jet.du, dm = jet.du;
        dp[s] += h;
        dm[s] -= h;
        const double fd =
            (g_value(jet.d2u, dp, spec) - g_value(jet.d2u, dm, spec)) / (2 * h);
        worst = std::max(worst, rel_err(fd, lin.Gs[s]));
      }
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          Mat rp = jet.d2u, rm = jet.d2u;
          rp(i, j) += h;
          rp(j, i) = rp(i, j);
          rm(i, j) -= h;
          rm(j, i) = rm(i, j);
          const double fd =
              (g_value(rp, jet.du, spec) - g_value(rm, jet.du, spec)) / (2 * h);
          const double an = (i == j) ? lin.Gij(i, i) : 2.0 * lin.Gij(i, j);
          worst = std::max(worst, rel_err(fd, an));
        }
      }
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("Gs vanishes at critical points") {
  const OperatorSpec spec{3, 2, 1};
  const PsiModel psi = PsiModel::constant(0.0, spec.power());
  GraphJet jet{Vec::Zero(3), 0.0, Vec::Zero(3), Mat::Identity(3, 3)};
  jet.d2u(0, 1) = jet.d2u(1, 0) = 0.2;
  const LinearizationData lin = linearize(jet, spec, psi);
  CHECK(lin.Gs.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("degenerate ellipticity: Gij stays positive semidefinite") {
  Rng rng(7);
  for (const auto [n, k, l] : {std::tuple{2, 1, 0}, {3, 2, 1}, {3, 2, 0}}) {
    const OperatorSpec spec{n, k, l};
    const PsiModel psi = PsiModel::constant(0.0, spec.power());
    for (int rep = 0; rep < 300; ++rep) {
      const GraphJet jet = random_admissible_jet(rng, n, k);
      const LinearizationData lin = linearize(jet, spec, psi);
      Eigen::SelfAdjointEigenSolver<Mat> es(lin.Gij);
      CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
  }
}

TEST_CASE("homogeneity of degree k-l in the Hessian at critical points") {
  Rng rng(11);
  const OperatorSpec spec{3, 2, 1};
  for (int rep = 0; rep < 200; ++rep) {
    GraphJet jet = random_admissible_jet(rng, 3, 2);
    jet.du.setZero();
    if (!admissible(jet, 2).inside) continue;
    const double g1 = g_value(jet.d2u, jet.du, spec);
    for (double c : {0.5, 2.0, 3.7}) {
      const double gc = g_value(c * jet.d2u, jet.du, spec);
      CHECK(std::abs(gc - std::pow(c, spec.power()) * g1) <=
            1e-10 * std::max(1.0, std::abs(gc)));
    }
  }
}

TEST_CASE("operator root is concave along Hessian segments") {
  Rng rng(13);
  const OperatorSpec spec{3, 2, 1};
  const double alpha = 1.0 / spec.power();
  int tested = 0;
  while (tested < 500) {
    GraphJet a = random_admissible_jet(rng, 3, 2);
    GraphJet b = random_admissible_jet(rng, 3, 2);
    b.du = a.du;  // common gradient
    GraphJet mid = a;
    mid.d2u = 0.5 * (a.d2u + b.d2u);
    if (!admissible(b, 2).inside || !admissible(mid, 2).inside) continue;
    ++tested;
    const double fa = std::pow(g_value(a.d2u, a.du, spec), alpha);
    const double fb = std::pow(g_value(b.d2u, b.du, spec), alpha);
    const double fm = std::pow(g_value(mid.d2u, mid.du, spec), alpha);
    CHECK(fm - 0.5 * (fa + fb) >= -1e-9 * std::max(1.0, fm));
  }
}

TEST_CASE("regularization semantics") {
  const int q = 2;
  const PsiModel zero = PsiModel::constant(0.0, q);
  const Vec x = Vec::Zero(3);
  const Vec nu = (Vec(4) << 0, 0, 0, 1).finished();

  CHECK(regularize(zero, 0.0).value(x, 0.0, nu) == 0.0);
  CHECK(regularize(zero, 0.1).value(x, 0.0, nu) == doctest::Approx(0.01));

  const PsiModel bump = PsiModel::radial_bump(0.8, 0.3, q);
  Rng rng(17);
  for (int rep = 0; rep < 500; ++rep) {
    const Vec p = sample_ball(rng, 3, 1.0);
    const double base = bump.value(p, 0.0, nu);
    double prev = base;
    for (double eps : {1e-4, 1e-3, 1e-2, 1e-1}) {
      const double v = regularize(bump, eps).value(p, 0.0, nu);
      CHECK(v >= prev - 1e-15);
      prev = v;
    }
    CHECK(regularize(bump, 1e-3).value(p, 0.0, nu) >= base);
  }
}

TEST_CASE("normal-dependent psi keeps psi_z nonnegative and feeds psi_p") {
  const OperatorSpec spec{2, 1, 0};
  const PsiModel psi = PsiModel::normal_dependent(1.0, 0.5, 0.3, spec.power());
  Rng rng(19);
  for (int rep = 0; rep < 100; ++rep) {
    const GraphJet jet = random_admissible_jet(rng, 2, 1);
    const SurfaceData s = surface_data(jet);
    CHECK(psi.dz(jet.x, jet.u, s.nu) >= 0.0);
    CHECK(psi.value(jet.x, jet.u, s.nu) >= 0.0);

    // psi_p from the tangent chart matches differencing the full residual
    const LinearizationData lin = linearize(jet, spec, psi);
    auto full = [&](const Vec& du) {
      GraphJet j2 = jet;
      j2.du = du;
      const SurfaceData s2 = surface_data(j2);
      return psi.value(j2.x, j2.u, s2.nu);
    };
    const Vec fd = fd_gradient(full, jet.du, 1e-6);
    for (int a = 0; a < 2; ++a) {
      CHECK(std::abs(fd[a] - lin.psi_p[a]) < 1e-5 * std::max(1.0, std::abs(fd[a])));
    }
  }
}

TEST_CASE("manufactured right-hand side tabulates the exact operator") {
  const OperatorSpec spec{2, 1, 0};
  const DomainSpec dom{Shape::disc, 0.8, 2};
  const Grid grid = build_grid(dom, 17);
  const double R = 1.0;
  const PsiModel psi = manufactured_rhs(cap_field(R, 0.8), spec, grid);

  const Vec nu = (Vec(3) << 0, 0, 1).finished();
  for (int id = 0; id < grid.num_interior(); ++id) {
    const Vec x = grid.coord(grid.interior_node(id));
    CHECK(psi.value(x, 0.0, nu) == doctest::Approx(2.0 / R).epsilon(1e-9));
  }

  // paraboloid table value at the origin equals the closed form
  const OperatorSpec spec3{3, 2, 1};
  const DomainSpec dom3{Shape::disc, 1.0, 3};
  const Grid grid3 = build_grid(dom3, 9);
  const double A = 0.4;  // u = -A(rb^2-|x|^2), Hessian 2A I at the origin
  const PsiModel psi3 =
      manufactured_rhs(radial_quartic_field(A, 0.0, 1.0), spec3, grid3);
  const Vec nu4 = (Vec(4) << 0, 0, 0, 1).finished();
  const double expected =
      g_value(2.0 * A * Mat::Identity(3, 3), Vec::Zero(3), spec3);
  CHECK(psi3.value(Vec::Zero(3), 0.0, nu4) == doctest::Approx(expected));
  CHECK(expected == doctest::Approx(4.0 * A));
}

TEST_CASE("manufactured construction rejects inadmissible exact fields") {
  const OperatorSpec spec{2, 1, 0};
  const Grid grid = build_grid({Shape::disc, 1.0, 2}, 9);
  // concave paraboloid: mean curvature negative everywhere
  CHECK_THROWS_AS(manufactured_rhs(radial_quartic_field(-0.5, 0.0, 1.0), spec, grid),
                  ConfigError);
}

TEST_CASE("psi spatial derivative matches finite differences") {
  const PsiModel bump = PsiModel::radial_bump(0.8, 0.3, 2);
  const Vec nu = (Vec(4) << 0, 0, 0, 1).finished();
  Rng rng(23);
  for (double eps : {0.0, 1e-2}) {
    const PsiModel model = regularize(bump, eps);
    for (int rep = 0; rep < 200; ++rep) {
      const Vec x = sample_ball(rng, 3, 1.0);
      if (std::abs(x.norm() - 0.3) < 1e-3) continue;  // hinge of the root
      const Vec dx = model.dx(x, 0.0, nu);
      const Vec fd = fd_gradient(
          [&](const Vec& y) { return model.value(y, 0.0, nu); }, x, 1e-6);
      const double scale = std::max(1.0, fd.cwiseAbs().maxCoeff());
      CHECK((dx - fd).cwiseAbs().maxCoeff() / scale < 1e-6);
    }
  }
}

TEST_CASE("psi model parameter validation") {
  CHECK_THROWS_AS(PsiModel::constant(-1.0, 1), ConfigError);
  CHECK_THROWS_AS(PsiModel::radial_bump(-1.0, 0.3, 1), ConfigError);
  CHECK_THROWS_AS(PsiModel::normal_dependent(1.0, -0.1, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(PsiModel::constant(1.0, 1).with_epsilon(-0.5), ConfigError);
}
