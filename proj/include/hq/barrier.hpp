#pragma once

#include "hq/grid.hpp"
#include "hq/symcalc.hpp"

#include <cstdint>
#include <string>

namespace hq {

/// Constants of the boundary barrier construction. The quantities are
/// existence-quantified in the estimates; search_barrier_params finds a
/// feasible set for a disc domain and records it.
struct BarrierParams {
  double theta = 0.0;   // boundary convexity slack, needs kappa_b - 3 theta
  double K = 0.0;       // normal-direction weight in the cone condition
  double eta0 = 0.0;    // uniform cone margin of D2v
  double delta = 0.0;   // collar width parameter
  double t = 0.0;       // linear distance coefficient of Psi
  double N = 0.0;       // quadratic distance coefficient of Psi
  double b = 1.0;       // exponent scale of W~
  double R_mult = 10.0; // multiplier of Psi in Phi
};

struct BarrierReport {
  BarrierParams params;
  int k = 0;
  int l = 0;
  int n = 0;
  double radius = 0.0;
  // minima over collar / boundary samples, all expected >= 0
  double slack_boundary1 = 0.0;   // v <= -theta |x'|^2 / 2 on the inner face
  double slack_boundary2 = 0.0;   // v <= -delta^2 / 2 on the outer face
  double slack_boundary3 = 0.0;   // v <= -theta delta^2 / 2 on the side
  double convexity_margin = 0.0;  // lambda(D2v - 2 eta0 I) in Gamma_{k+1}
  double projection_cone = 0.0;   // projected eigenvalues stay in Gamma_k
  double projection_quotient = 0.0;
  double psi_side = 0.0;          // t d - (N/2) d^2 >= 0 on the collar
  int collar_nodes = 0;
  bool pass = false;
  double worst() const;
};

// Collar geometry in boundary-adapted coordinates: origin at a boundary
// point of the disc of radius R, x_n along the interior normal, so the
// boundary is the graph x_n = rho(x').
double collar_rho(const Vec& xprime, double R);
Vec collar_rho_grad(const Vec& xprime, double R);
Mat collar_rho_hess(const Vec& xprime, double R);
/// Distance to the circle from a collar point.
double collar_distance(const Vec& xprime, double xn, double R);

double barrier_v(const Vec& xprime, double xn, const BarrierParams& p, double R);
/// D2 of barrier_v; independent of x_n.
Mat barrier_v_hess(const Vec& xprime, const BarrierParams& p, double R);

/// Tangential combination W = u_alpha + rho_alpha u_n - (1/2) sum_{beta<n} u_beta^2.
double tangential_w(const Vec& du, const Vec& rho_grad, int alpha);
double wtilde(double w, double b);
double barrier_psi(double v, double d, double t, double N);
double barrier_phi(double r_mult, double psi, double wt);

/// Feasible constants for the disc of the given dimension and order,
/// searched by bisection/doubling. Throws ConfigError if the domain is not
/// uniformly k-convex in the required sense (cannot happen for a disc with
/// theta < kappa_b/3).
BarrierParams search_barrier_params(int n, int k, double radius,
                                    int samples_per_axis = 17);

/// Checks the barrier inequalities nodewise on the collar. Throws
/// ConfigError when params violate the cone condition on
/// (kappa_b - 3 theta, ..., 2K). Failed bound checks are reported as
/// negative slacks, not errors.
BarrierReport barrier_check(int n, int k, int l, double radius,
                            const BarrierParams& params,
                            int samples_per_axis = 17,
                            int p_samples = 16, uint64_t seed = 42);

}  // namespace hq
