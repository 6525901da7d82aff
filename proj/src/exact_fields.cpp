#include "hq/exact_fields.hpp"

#include <cmath>

namespace hq {

ExactField cap_field(double R, double boundary_radius) {
  if (!(R > boundary_radius)) {
    throw ConfigError("cap_field: sphere radius must exceed the disc radius");
  }
  ExactField f;
  f.name = "cap";
  f.max_radius = 0.999 * R;
  const double shift = std::sqrt(R * R - boundary_radius * boundary_radius);
  f.value = [R, shift](const Vec& x) {
    return shift - std::sqrt(R * R - x.squaredNorm());
  };
  f.grad = [R](const Vec& x) -> Vec {
    const double w = std::sqrt(R * R - x.squaredNorm());
    return x / w;
  };
  f.hess = [R](const Vec& x) -> Mat {
    const int n = static_cast<int>(x.size());
    const double w = std::sqrt(R * R - x.squaredNorm());
    return Mat::Identity(n, n) / w + x * x.transpose() / (w * w * w);
  };
  return f;
}

ExactField radial_quartic_field(double A, double B, double boundary_radius) {
  ExactField f;
  f.name = "quartic";
  const double rb2 = boundary_radius * boundary_radius;
  f.value = [A, B, rb2](const Vec& x) {
    const double d = rb2 - x.squaredNorm();
    return -d * (A + B * d);
  };
  f.grad = [A, B, rb2](const Vec& x) -> Vec {
    const double d = rb2 - x.squaredNorm();
    return 2.0 * (A + 2.0 * B * d) * x;
  };
  f.hess = [A, B, rb2](const Vec& x) -> Mat {
    const int n = static_cast<int>(x.size());
    const double d = rb2 - x.squaredNorm();
    return 2.0 * (A + 2.0 * B * d) * Mat::Identity(n, n) -
           8.0 * B * x * x.transpose();
  };
  return f;
}

ExactField make_exact_field(const std::string& name, double boundary_radius) {
  if (name == "cap") return cap_field(1.25 * boundary_radius, boundary_radius);
  if (name == "quartic") return radial_quartic_field(0.5, 0.1, boundary_radius);
  throw ConfigError("unknown exact field '" + name + "' (known: cap, quartic)");
}

}  // namespace hq
