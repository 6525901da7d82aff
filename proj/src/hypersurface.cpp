#include "hq/hypersurface.hpp"

#include <algorithm>
#include <cmath>

namespace hq {

SurfaceData surface_data(const GraphJet& jet) {
  const int n = static_cast<int>(jet.du.size());
  if (!jet.du.allFinite() || !jet.d2u.allFinite() || !std::isfinite(jet.u)) {
    throw std::domain_error("surface_data: non-finite jet");
  }
  if (jet.d2u.rows() != n || jet.d2u.cols() != n) {
    throw std::domain_error("surface_data: Hessian dimension mismatch");
  }

  SurfaceData s;
  const double du2 = jet.du.squaredNorm();
  s.omega = std::sqrt(1.0 + du2);

  s.nu.resize(n + 1);
  s.nu.head(n) = -jet.du / s.omega;
  s.nu[n] = 1.0 / s.omega;

  s.g = Mat::Identity(n, n) + jet.du * jet.du.transpose();
  s.gamma_up = Mat::Identity(n, n) -
               jet.du * jet.du.transpose() / (s.omega * (1.0 + s.omega));
  s.gamma_down =
      Mat::Identity(n, n) + jet.du * jet.du.transpose() / (1.0 + s.omega);

  const Mat sym = 0.5 * (jet.d2u + jet.d2u.transpose());
  s.shape = s.gamma_up * sym * s.gamma_up / s.omega;

  Eigen::SelfAdjointEigenSolver<Mat> es(s.shape);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("surface_data: eigensolver failed");
  }
  s.kappa = es.eigenvalues();  // ascending
  s.kappa_vectors = es.eigenvectors();
  s.H = s.kappa.sum();

  s.eta_eigs = eta_map(s.kappa);
  std::sort(s.eta_eigs.data(), s.eta_eigs.data() + n);
  return s;
}

ConeResult admissible(const GraphJet& jet, int k) {
  const SurfaceData s = surface_data(jet);
  return in_cone(s.kappa, {k, 0, ConeKind::gamma_tilde});
}

}  // namespace hq
