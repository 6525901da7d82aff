#pragma once

#include "hq/symcalc.hpp"

#include <cstdint>
#include <string_view>

namespace hq {

/// Deterministic generator with hand-rolled canonical doubles so streams
/// are identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed);
  uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();   // Box-Muller

 private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Stable sub-seed for a named stream and shard.
uint64_t mix_seed(uint64_t seed, std::string_view tag, uint64_t shard);

/// Rejection sampling of cone points with entries i.i.d. uniform on
/// [lo, hi]. Throws SamplingError when the acceptance rate stays below
/// 0.1 percent.
Vec sample_cone_point(Rng& rng, int n, const ConeQuery& q, double lo = -1.0,
                      double hi = 3.0);

Mat haar_orthogonal(Rng& rng, int n);

/// Random symmetric matrix with eigenvalues sampled in Gamma_k (rejection
/// on [lo, hi]) and Haar-random eigenvectors.
Mat sample_symmetric_in_cone(Rng& rng, int n, int k, double lo = -1.0,
                             double hi = 3.0);

Vec sample_ball(Rng& rng, int n, double radius);

}  // namespace hq
