#pragma once

#include "hq/hypersurface.hpp"

#include <functional>
#include <string>

namespace hq {

/// Analytic reference solution with closed-form jets, used to manufacture
/// right-hand sides and to measure discretization error.
struct ExactField {
  std::string name;
  double max_radius = 1e300;  // evaluate only within |x| <= max_radius
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;

  GraphJet jet(const Vec& x) const {
    Vec y = x;
    const double r = y.norm();
    if (r > max_radius) y *= max_radius / r;
    return {y, value(y), grad(y), hess(y)};
  }
};

/// Lower spherical cap of radius R over the disc |x| < boundary_radius,
/// shifted to vanish on the disc boundary. All principal curvatures 1/R.
ExactField cap_field(double R, double boundary_radius);

/// u = -(rb^2-|x|^2) (A + B (rb^2-|x|^2)); radial, vanishes on |x| = rb,
/// admissible for modest B (all Hessian eigenvalues positive when A > 6 B rb^2).
ExactField radial_quartic_field(double A, double B, double boundary_radius);

ExactField make_exact_field(const std::string& name, double boundary_radius);

}  // namespace hq
