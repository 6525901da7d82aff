#include "hq/barrier.hpp"

#include "hq/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hq {

double BarrierReport::worst() const {
  double w = slack_boundary1;
  w = std::min(w, slack_boundary2);
  w = std::min(w, slack_boundary3);
  w = std::min(w, convexity_margin);
  w = std::min(w, projection_cone);
  w = std::min(w, projection_quotient);
  w = std::min(w, psi_side);
  return w;
}

double collar_rho(const Vec& xprime, double R) {
  return R - std::sqrt(R * R - xprime.squaredNorm());
}

Vec collar_rho_grad(const Vec& xprime, double R) {
  const double w = std::sqrt(R * R - xprime.squaredNorm());
  return xprime / w;
}

Mat collar_rho_hess(const Vec& xprime, double R) {
  const int d = static_cast<int>(xprime.size());
  const double w = std::sqrt(R * R - xprime.squaredNorm());
  return Mat::Identity(d, d) / w + xprime * xprime.transpose() / (w * w * w);
}

double collar_distance(const Vec& xprime, double xn, double R) {
  const double dx = xn - R;
  return R - std::sqrt(xprime.squaredNorm() + dx * dx);
}

double barrier_v(const Vec& xprime, double xn, const BarrierParams& p,
                 double R) {
  return collar_rho(xprime, R) - xn - p.theta * xprime.squaredNorm() +
         p.K * xn * xn;
}

Mat barrier_v_hess(const Vec& xprime, const BarrierParams& p, double R) {
  const int d = static_cast<int>(xprime.size());
  Mat h = Mat::Zero(d + 1, d + 1);
  h.topLeftCorner(d, d) =
      collar_rho_hess(xprime, R) - 2.0 * p.theta * Mat::Identity(d, d);
  h(d, d) = 2.0 * p.K;
  return h;
}

double tangential_w(const Vec& du, const Vec& rho_grad, int alpha) {
  const int n = static_cast<int>(du.size());
  double w = du[alpha] + rho_grad[alpha] * du[n - 1];
  for (int beta = 0; beta + 1 < n; ++beta) w -= 0.5 * du[beta] * du[beta];
  return w;
}

double wtilde(double w, double b) { return 1.0 - std::exp(-b * w); }

double barrier_psi(double v, double d, double t, double N) {
  return v - t * d + 0.5 * N * d * d;
}

double barrier_phi(double r_mult, double psi, double wt) {
  return r_mult * psi - wt;
}

namespace {

bool cone_condition(double kappa_b, double theta, double K, int n, int k) {
  Vec v(n);
  for (int i = 0; i + 1 < n; ++i) v[i] = kappa_b - 3.0 * theta;
  v[n - 1] = 2.0 * K;
  return in_cone(v, {std::min(k + 1, n), 0, ConeKind::gamma}).inside;
}

// x' sample points filling |x'| <= delta (lattice for 1D/2D cross-sections)
std::vector<Vec> tangential_samples(int d, double delta, int per_axis) {
  std::vector<Vec> pts;
  if (d == 1) {
    for (int i = 0; i < per_axis; ++i) {
      Vec x(1);
      x[0] = -delta + 2.0 * delta * i / (per_axis - 1);
      pts.push_back(x);
    }
  } else {
    for (int i = 0; i < per_axis; ++i) {
      for (int j = 0; j < per_axis; ++j) {
        Vec x(2);
        x[0] = -delta + 2.0 * delta * i / (per_axis - 1);
        x[1] = -delta + 2.0 * delta * j / (per_axis - 1);
        if (x.norm() <= delta) pts.push_back(x);
      }
    }
  }
  return pts;
}

std::vector<Vec> rim_samples(int d, double delta, int count) {
  std::vector<Vec> pts;
  if (d == 1) {
    Vec a(1), b(1);
    a[0] = delta;
    b[0] = -delta;
    pts.push_back(a);
    pts.push_back(b);
  } else {
    for (int i = 0; i < count; ++i) {
      const double ang = 2.0 * M_PI * i / count;
      Vec x(2);
      x[0] = delta * std::cos(ang);
      x[1] = delta * std::sin(ang);
      pts.push_back(x);
    }
  }
  return pts;
}

}  // namespace

BarrierParams search_barrier_params(int n, int k, double radius,
                                    int samples_per_axis) {
  if (n < 2 || n > 3) throw ConfigError("barrier: dimension must be 2 or 3");
  if (!(k >= 1 && k < n)) throw ConfigError("barrier: need 1 <= k < n");
  const double kappa_b = 1.0 / radius;

  BarrierParams p;
  // theta: half the supremum for which the cone condition stays feasible
  // with some doubling K
  auto theta_feasible = [&](double theta) {
    for (double K = kappa_b; K <= kappa_b * (1 << 20); K *= 2.0) {
      if (cone_condition(kappa_b, theta, K, n, k)) return K;
    }
    return -1.0;
  };
  double lo = 0.0, hi = kappa_b / 3.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (theta_feasible(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  p.theta = 0.5 * lo;
  p.K = theta_feasible(p.theta);
  if (p.K <= 0.0) throw ConfigError("barrier: no feasible (theta, K) found");

  // delta: halve until the boundary bounds hold and a positive eta0 exists
  const int d = n - 1;
  for (double delta = 0.4 * radius; delta >= radius / 4096.0; delta *= 0.5) {
    p.delta = delta;
    const auto xs = tangential_samples(d, delta, samples_per_axis);

    auto eta0_feasible = [&](double eta0) {
      BarrierParams q = p;
      q.eta0 = eta0;
      for (const Vec& x : xs) {
        const Mat h = barrier_v_hess(x, q, radius) -
                      2.0 * eta0 * Mat::Identity(n, n);
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        if (!in_cone(es.eigenvalues(), {std::min(k + 1, n), 0, ConeKind::gamma})
                 .inside) {
          return false;
        }
      }
      return true;
    };
    if (!eta0_feasible(0.0)) continue;
    double e_lo = 0.0, e_hi = 1.0;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (e_lo + e_hi);
      if (eta0_feasible(mid)) {
        e_lo = mid;
      } else {
        e_hi = mid;
      }
    }
    p.eta0 = 0.5 * e_lo;
    if (p.eta0 <= 0.0) continue;

    bool bounds_ok = true;
    for (const Vec& x : xs) {
      const double rho = collar_rho(x, radius);
      const double v1 = barrier_v(x, rho, p, radius);
      const double v2 = barrier_v(x, rho + delta * delta, p, radius);
      if (v1 > -0.5 * p.theta * x.squaredNorm() ||
          v2 > -0.5 * delta * delta) {
        bounds_ok = false;
        break;
      }
    }
    for (const Vec& x : rim_samples(d, delta, 4 * samples_per_axis)) {
      const double rho = collar_rho(x, radius);
      for (int i = 0; i < samples_per_axis; ++i) {
        const double xn = rho + delta * delta * i / (samples_per_axis - 1);
        if (barrier_v(x, xn, p, radius) > -0.5 * p.theta * delta * delta) {
          bounds_ok = false;
          break;
        }
      }
      if (!bounds_ok) break;
    }
    if (!bounds_ok) continue;

    // side constants of Psi and the free verification constants
    double d_max = 0.0;
    for (const Vec& x : xs) {
      const double rho = collar_rho(x, radius);
      d_max = std::max(d_max, collar_distance(x, rho + delta * delta, radius));
    }
    p.N = 1.0;
    p.t = 0.75 * p.N * d_max;  // keeps d <= 2t/N on the collar
    p.b = 1.0;
    p.R_mult = 10.0;
    return p;
  }
  throw ConfigError("barrier: no feasible delta found");
}

BarrierReport barrier_check(int n, int k, int l, double radius,
                            const BarrierParams& params, int samples_per_axis,
                            int p_samples, uint64_t seed) {
  if (n < 2 || n > 3) throw ConfigError("barrier: dimension must be 2 or 3");
  if (!(0 <= l && l < k && k < n)) {
    throw ConfigError("barrier: orders must satisfy 0 <= l < k < n");
  }
  const double kappa_b = 1.0 / radius;
  if (!cone_condition(kappa_b, params.theta, params.K, n, k)) {
    throw ConfigError(
        "barrier: (kappa_b - 3 theta, ..., 2K) violates the uniform "
        "k-convexity cone condition");
  }

  BarrierReport rep;
  rep.params = params;
  rep.k = k;
  rep.l = l;
  rep.n = n;
  rep.radius = radius;

  const int d = n - 1;
  const double delta = params.delta;
  const auto xs = tangential_samples(d, delta, samples_per_axis);

  double inf = std::numeric_limits<double>::infinity();
  rep.slack_boundary1 = inf;
  rep.slack_boundary2 = inf;
  rep.slack_boundary3 = inf;
  rep.convexity_margin = inf;
  rep.projection_cone = inf;
  rep.projection_quotient = inf;
  rep.psi_side = inf;

  Rng rng(mix_seed(seed, "barrier-p", 0));
  std::vector<Vec> ps;
  for (int i = 0; i < p_samples; ++i) ps.push_back(sample_ball(rng, n, 2.0));

  for (const Vec& x : xs) {
    const double rho = collar_rho(x, radius);
    rep.slack_boundary1 = std::min(
        rep.slack_boundary1,
        -0.5 * params.theta * x.squaredNorm() - barrier_v(x, rho, params, radius));
    rep.slack_boundary2 =
        std::min(rep.slack_boundary2,
                 -0.5 * delta * delta -
                     barrier_v(x, rho + delta * delta, params, radius));

    const Mat h = barrier_v_hess(x, params, radius);
    const Mat shifted = h - 2.0 * params.eta0 * Mat::Identity(n, n);
    Eigen::SelfAdjointEigenSolver<Mat> es(shifted);
    const ConeResult conv =
        in_cone(es.eigenvalues(), {k + 1, 0, ConeKind::gamma});
    rep.convexity_margin = std::min(rep.convexity_margin, conv.margin);

    if (conv.inside) {
      for (const Vec& p : ps) {
        const ProjectionSlacks s = check_projection_inequality(shifted, p, k, l);
        rep.projection_cone = std::min(rep.projection_cone, s.cone_slack);
        rep.projection_quotient =
            std::min(rep.projection_quotient, s.quotient_slack);
      }
    }

    for (int i = 0; i < samples_per_axis; ++i) {
      const double xn = rho + delta * delta * i / (samples_per_axis - 1);
      const double dist = collar_distance(x, xn, radius);
      rep.psi_side = std::min(rep.psi_side,
                              params.t * dist - 0.5 * params.N * dist * dist);
      ++rep.collar_nodes;
    }
  }

  for (const Vec& x : rim_samples(d, delta, 4 * samples_per_axis)) {
    const double rho = collar_rho(x, radius);
    for (int i = 0; i < samples_per_axis; ++i) {
      const double xn = rho + delta * delta * i / (samples_per_axis - 1);
      rep.slack_boundary3 =
          std::min(rep.slack_boundary3, -0.5 * params.theta * delta * delta -
                                            barrier_v(x, xn, params, radius));
    }
  }

  rep.pass = rep.worst() >= -1e-9 && rep.convexity_margin > 0.0;
  return rep;
}

}  // namespace hq
