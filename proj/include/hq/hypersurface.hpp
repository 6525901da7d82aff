#pragma once

#include "hq/symcalc.hpp"

namespace hq {

/// Second-order data of the graph of u at one spatial point.
struct GraphJet {
  Vec x;    // spatial point
  double u = 0.0;
  Vec du;   // gradient
  Mat d2u;  // Hessian (symmetric)
};

/// Pointwise geometry of the graph M_u derived from a jet. Curvature sign
/// convention: upward normal nu = (-Du, 1)/omega, so the lower hemisphere
/// graph has principal curvatures +1/R.
struct SurfaceData {
  double omega = 1.0;  // sqrt(1+|Du|^2)
  Vec nu;              // unit upward normal, length n+1
  Mat g;               // induced metric delta_ij + u_i u_j
  Mat gamma_up;        // delta_ik - u_i u_k / (omega (1+omega))
  Mat gamma_down;      // delta_ij + u_i u_j / (1+omega), square root of g
  Mat shape;           // a_ij = gamma_up d2u gamma_up / omega
  Vec kappa;           // principal curvatures, ascending
  Mat kappa_vectors;   // eigenvectors of shape, columns aligned with kappa
  double H = 0.0;      // mean curvature, sum of kappa
  Vec eta_eigs;        // eta_map(kappa), ascending
};

SurfaceData surface_data(const GraphJet& jet);

/// (eta,k)-convexity of the graph at the jet: kappa in Gamma~_k.
ConeResult admissible(const GraphJet& jet, int k);

}  // namespace hq
