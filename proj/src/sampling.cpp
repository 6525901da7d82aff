#include "hq/sampling.hpp"

#include <cmath>
#include <sstream>

namespace hq {

namespace {

uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(uint64_t seed) : state_(seed) {
  // warm up so nearby seeds decorrelate
  for (int i = 0; i < 4; ++i) splitmix64(state_);
}

uint64_t Rng::next() { return splitmix64(state_); }

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

uint64_t mix_seed(uint64_t seed, std::string_view tag, uint64_t shard) {
  uint64_t h = seed ^ 0x243f6a8885a308d3ULL;
  for (char c : tag) {
    h ^= static_cast<uint64_t>(static_cast<unsigned char>(c));
    h *= 0x100000001b3ULL;
  }
  h ^= shard + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

Vec sample_cone_point(Rng& rng, int n, const ConeQuery& q, double lo,
                      double hi) {
  Vec v(n);
  long attempts = 0;
  long accepts = 0;
  for (;;) {
    ++attempts;
    for (int i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
    if (in_cone(v, q).inside) {
      ++accepts;
      return v;
    }
    if (attempts >= 100000 && accepts == 0) {
      std::ostringstream os;
      os << "sample_cone_point: acceptance below 0.1% after " << attempts
         << " draws (n=" << n << ", k=" << q.k << ", kind="
         << (q.kind == ConeKind::gamma ? "gamma" : "gamma_tilde")
         << ", range [" << lo << ", " << hi << "])";
      throw SamplingError(os.str());
    }
  }
}

Mat haar_orthogonal(Rng& rng, int n) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Mat sample_symmetric_in_cone(Rng& rng, int n, int k, double lo, double hi) {
  const Vec lam = sample_cone_point(rng, n, {k, 0, ConeKind::gamma}, lo, hi);
  const Mat q = haar_orthogonal(rng, n);
  return q * lam.asDiagonal() * q.transpose();
}

Vec sample_ball(Rng& rng, int n, double radius) {
  Vec v(n);
  for (;;) {
    for (int i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
    if (v.squaredNorm() <= 1.0) return radius * v;
  }
}

}  // namespace hq
