#include "hq/hypersurface.hpp"

#include "hq/exact_fields.hpp"
#include "hq/sampling.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace hq;
using namespace hq::testing;

TEST_CASE("flat plane geometry") {
  GraphJet jet;
  jet.x = Vec::Zero(3);
  jet.u = 0.0;
  jet.du = Vec::Zero(3);
  jet.d2u = Mat::Zero(3, 3);
  const SurfaceData s = surface_data(jet);
  CHECK(s.omega == 1.0);
  CHECK(s.nu[3] == 1.0);
  CHECK(s.nu.head(3).norm() == 0.0);
  CHECK(s.kappa.cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.H == 0.0);
}

TEST_CASE("critical point with d2u = a I") {
  const int n = 3;
  const double a = 0.7;
  GraphJet jet{Vec::Zero(n), 0.0, Vec::Zero(n), a * Mat::Identity(n, n)};
  const SurfaceData s = surface_data(jet);
  for (int i = 0; i < n; ++i) {
    CHECK(s.kappa[i] == doctest::Approx(a));
    CHECK(s.eta_eigs[i] == doctest::Approx((n - 1) * a));
  }
  CHECK(admissible(jet, n).inside);

  GraphJet neg = jet;
  neg.d2u = -a * Mat::Identity(n, n);
  CHECK_FALSE(admissible(neg, 1).inside);
}

TEST_CASE("sphere jets have curvature 1/R") {
  Rng rng(3);
  for (int n : {2, 3}) {
    const double R = 1.3;
    const ExactField cap = cap_field(R, 0.8);
    for (int rep = 0; rep < 50; ++rep) {
      const Vec x = sample_ball(rng, n, 0.9);
      const SurfaceData s = surface_data(cap.jet(x));
      for (int i = 0; i < n; ++i) {
        CHECK(std::abs(s.kappa[i] - 1.0 / R) < 1e-9);
      }
      const ConeResult adm = admissible(cap.jet(x), n);
      CHECK(adm.inside);
      CHECK(adm.margin > 0.0);
    }
  }
}

TEST_CASE("surface data internal identities") {
  Rng rng(7);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 2 + static_cast<int>(rng.next() % 2);
    const GraphJet jet = random_jet(rng, n);
    const SurfaceData s = surface_data(jet);

    CHECK(std::abs(s.nu.norm() - 1.0) < 1e-12);
    CHECK(s.nu[n] == doctest::Approx(1.0 / s.omega));
    CHECK((s.gamma_down * s.gamma_down - s.g).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((s.gamma_up * s.gamma_down - Mat::Identity(n, n)).cwiseAbs().maxCoeff() <
          1e-10);
    CHECK(std::abs(s.H - s.kappa.sum()) < 1e-10);

    Vec eta = eta_map(s.kappa);
    std::sort(eta.data(), eta.data() + n);
    CHECK((eta - s.eta_eigs).cwiseAbs().maxCoeff() < 1e-10);

    // omega consistency: g^{ij} u_i u_j equals |Du|^2 / (1 + |Du|^2)
    const double via_metric = jet.du.dot(s.g.inverse() * jet.du);
    const double direct = jet.du.squaredNorm() / (1.0 + jet.du.squaredNorm());
    CHECK(std::abs(via_metric - direct) < 1e-12);
  }
}

TEST_CASE("rotation invariance of principal curvatures") {
  Rng rng(13);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 2 + static_cast<int>(rng.next() % 2);
    const GraphJet jet = random_jet(rng, n);
    const Mat q = haar_orthogonal(rng, n);
    GraphJet rotated = jet;
    rotated.du = q * jet.du;
    rotated.d2u = q * jet.d2u * q.transpose();
    const Vec k1 = surface_data(jet).kappa;
    const Vec k2 = surface_data(rotated).kappa;
    CHECK((k1 - k2).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("curvature scaling under u(cx)/c") {
  Rng rng(17);
  for (double c : {0.5, 2.0}) {
    for (int rep = 0; rep < 100; ++rep) {
      const GraphJet jet = random_jet(rng, 3);
      GraphJet scaled = jet;  // jet of u(c x)/c at x: same Du, Hessian times c
      scaled.d2u = c * jet.d2u;
      const Vec k1 = surface_data(jet).kappa;
      const Vec k2 = surface_data(scaled).kappa;
      CHECK((c * k1 - k2).cwiseAbs().maxCoeff() <
            1e-10 * std::max(1.0, k2.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("non-finite jets are rejected") {
  GraphJet jet{Vec::Zero(2), 0.0, Vec::Zero(2), Mat::Zero(2, 2)};
  jet.du[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(surface_data(jet), std::domain_error);
}
