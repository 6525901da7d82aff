#include "hq/symcalc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace hq {

namespace {

// All sigma values of a vector up to order kmax, summed left-to-right over
// ascending-sorted entries (reproducible under permutation of the input).
std::vector<double> sigma_table(const Vec& lam, int kmax) {
  std::vector<double> x(lam.data(), lam.data() + lam.size());
  std::sort(x.begin(), x.end());
  std::vector<double> e(static_cast<size_t>(kmax) + 1, 0.0);
  e[0] = 1.0;
  int filled = 0;
  for (double xi : x) {
    ++filled;
    for (int j = std::min(kmax, filled); j >= 1; --j) {
      e[static_cast<size_t>(j)] += xi * e[static_cast<size_t>(j) - 1];
    }
  }
  return e;
}

Vec drop_entry(const Vec& lam, int i) {
  Vec out(lam.size() - 1);
  int w = 0;
  for (int j = 0; j < lam.size(); ++j) {
    if (j != i) out[w++] = lam[j];
  }
  return out;
}

void require_index(const Vec& lam, int i) {
  if (i < 0 || i >= lam.size()) {
    throw std::domain_error("sigma partial: index out of range");
  }
}

}  // namespace

double sigma(int k, const Vec& lam) {
  const int n = static_cast<int>(lam.size());
  if (k < 0 || k > n) {
    throw std::domain_error("sigma: order k must satisfy 0 <= k <= n");
  }
  if (k == 0) return 1.0;
  return sigma_table(lam, k)[static_cast<size_t>(k)];
}

double sigma_partial(int k, const Vec& lam, int i) {
  const int n = static_cast<int>(lam.size());
  require_index(lam, i);
  if (k < 0 || k > n) {
    throw std::domain_error("sigma_partial: order k must satisfy 0 <= k <= n");
  }
  if (k == 0) return 0.0;  // sigma_0 is constant
  return sigma(k - 1, drop_entry(lam, i));
}

double sigma_partial2(int k, const Vec& lam, int i, int j) {
  const int n = static_cast<int>(lam.size());
  require_index(lam, i);
  require_index(lam, j);
  if (k < 0 || k > n) {
    throw std::domain_error("sigma_partial2: order k must satisfy 0 <= k <= n");
  }
  if (i == j || k <= 1) return 0.0;
  Vec reduced = drop_entry(lam, std::max(i, j));
  reduced = drop_entry(reduced, std::min(i, j));
  return sigma(k - 2, reduced);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return std::round(r);
}

Vec eta_map(const Vec& kappa) {
  const double total = kappa.sum();
  return Vec::Constant(kappa.size(), total) - kappa;
}

ConeResult in_cone(const Vec& v, const ConeQuery& q) {
  const int n = static_cast<int>(v.size());
  if (q.k < 1 || q.k > n) {
    throw std::domain_error("in_cone: order k must satisfy 1 <= k <= n");
  }
  const Vec lam = (q.kind == ConeKind::gamma_tilde) ? eta_map(v) : v;
  const std::vector<double> e = sigma_table(lam, q.k);
  double margin = e[1];
  for (int i = 2; i <= q.k; ++i) {
    margin = std::min(margin, e[static_cast<size_t>(i)]);
  }
  return {margin > kConeTol, margin};
}

double ConeChecks::worst_slack() const {
  double w = gamma1_margin;
  w = std::min(w, grad_lower_bound);
  w = std::min(w, concavity_form);
  w = std::min(w, eta_sorted);
  w = std::min(w, eta_pos);
  w = std::min(w, partial_ratio);
  w = std::min(w, grad_eta_monotone);
  w = std::min(w, grad_lambda_monotone);
  w = std::min(w, min_grad_ratio);
  w = std::min(w, sum_grad_vs_power);
  return w;
}

QuotientJet quotient_jet(const Vec& lam, int k, int l, bool want_hess) {
  const int n = static_cast<int>(lam.size());
  if (!(0 <= l && l < k && k <= n)) {
    throw std::domain_error("quotient_jet: orders must satisfy 0 <= l < k <= n");
  }
  const double num = sigma(k, lam);
  const double den = sigma(l, lam);
  if (l >= 1 && den <= 0.0) {
    throw ConeViolation("quotient_jet: sigma_l <= 0 (outside Gamma_l)", den);
  }

  QuotientJet jet;
  jet.value = num / den;
  jet.grad.resize(n);
  Vec num_i(n), den_i(n);
  for (int i = 0; i < n; ++i) {
    num_i[i] = sigma_partial(k, lam, i);
    den_i[i] = sigma_partial(l, lam, i);
    jet.grad[i] = (num_i[i] * den - num * den_i[i]) / (den * den);
  }

  if (want_hess) {
    Mat h(n, n);
    const double d2 = den * den;
    const double d3 = d2 * den;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double nij = sigma_partial2(k, lam, i, j);
        const double dij = sigma_partial2(l, lam, i, j);
        double v = nij / den - (num_i[i] * den_i[j] + num_i[j] * den_i[i]) / d2 -
                   num * dij / d2 + 2.0 * num * den_i[i] * den_i[j] / d3;
        h(i, j) = v;
        h(j, i) = v;
      }
    }
    jet.hess = std::move(h);
  }
  return jet;
}

double check_newton_maclaurin(const Vec& lam, int k, int l, int r, int s) {
  const int n = static_cast<int>(lam.size());
  if (!(n >= k && k > l && l >= 0 && n >= r && r > s && s >= 0 && k >= r &&
        l >= s)) {
    throw std::domain_error("check_newton_maclaurin: invalid order tuple");
  }
  const ConeResult cone = in_cone(lam, {k, 0, ConeKind::gamma});
  if (!cone.inside) {
    throw std::domain_error("check_newton_maclaurin: lambda outside Gamma_k");
  }
  const double lhs =
      (sigma(k, lam) / binomial(n, k)) / (sigma(l, lam) / binomial(n, l));
  const double rhs =
      (sigma(r, lam) / binomial(n, r)) / (sigma(s, lam) / binomial(n, s));
  return std::pow(rhs, 1.0 / (r - s)) - std::pow(lhs, 1.0 / (k - l));
}

namespace {

double rel_slack(double lhs, double rhs) {
  // rhs - lhs normalized so that -1e-9 style thresholds are scale-free
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return (rhs - lhs) / scale;
}

}  // namespace

ConeChecks check_cone_inequalities(const Vec& kappa, int k, int l,
                                   const Vec* xi) {
  const int n = static_cast<int>(kappa.size());
  if (!(0 <= l && l < k && k <= n)) {
    throw std::domain_error(
        "check_cone_inequalities: orders must satisfy 0 <= l < k <= n");
  }
  const ConeResult cone = in_cone(kappa, {k, l, ConeKind::gamma_tilde});
  if (!cone.inside) {
    throw ConeViolation("check_cone_inequalities: kappa outside Gamma~_k",
                        cone.margin);
  }

  // Sort kappa descending; eta is then ascending.
  std::vector<double> ks(kappa.data(), kappa.data() + n);
  std::sort(ks.begin(), ks.end(), std::greater<double>());
  Vec kap = Eigen::Map<Vec>(ks.data(), n);
  const Vec eta = eta_map(kap);

  ConeChecks out;
  out.gamma1_margin = kap.sum();

  const QuotientJet qj = quotient_jet(eta, k, l, true);
  const Vec& f = qj.grad;  // dF/d eta_i, aligned with eta (ascending)
  const double fsum = f.sum();

  // Gradient w.r.t. the curvature variable: dF/d kappa_i = fsum - f_i.
  Vec glam(n);
  for (int i = 0; i < n; ++i) glam[i] = fsum - f[i];

  // Lower bound on dF/d kappa_i by sums of per-index quotient products.
  {
    const double sl = sigma(l, eta);
    const double coeff =
        static_cast<double>(n) * (k - l) / (static_cast<double>(k) * (n - l));
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      double bound = 0.0;
      for (int p = 0; p < n; ++p) {
        if (p == i) continue;
        bound += sigma_partial(k, eta, p) * sigma_partial(l + 1, eta, p);
      }
      bound *= coeff / (sl * sl);
      worst = std::min(worst, rel_slack(bound, glam[i]));
    }
    out.grad_lower_bound = worst;
  }

  // Concavity quadratic form vs its rank-one upper bound, in the kappa
  // variable: H_kappa[i][j] = sum_{m != i, q != j} H_eta[m][q].
  {
    Vec x;
    if (xi != nullptr && xi->size() == n) {
      x = *xi;
    } else {
      x.resize(n);
      for (int i = 0; i < n; ++i) x[i] = (i % 2 == 0) ? 1.0 : -1.0;
    }
    const Mat& he = *qj.hess;
    const Vec rowsum = he.rowwise().sum();
    const double total = rowsum.sum();
    double lhs = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double hk = total - rowsum[i] - rowsum[j] + he(i, j);
        lhs += hk * x[i] * x[j];
      }
    }
    const double gdot = glam.dot(x);
    const double rhs = (1.0 - 1.0 / (k - l)) * gdot * gdot / qj.value;
    out.concavity_form = rel_slack(lhs, rhs);
  }

  // Ordering of eta and positivity of eta_{n-k+1} (ascending, 1-based).
  {
    double worst = std::numeric_limits<double>::infinity();
    const double scale = std::max(1.0, eta.cwiseAbs().maxCoeff());
    for (int i = 0; i + 1 < n; ++i) {
      worst = std::min(worst, (eta[i + 1] - eta[i]) / scale);
    }
    out.eta_sorted = worst;
    out.eta_pos = eta[n - k];
  }

  // sigma_{k-1}(eta | n-k+1) / sigma_{k-1}(eta), calibration ratio.
  out.partial_ratio = sigma_partial(k, eta, n - k) / sigma(k - 1, eta);

  // Monotonicity of the gradients under the chosen ordering.
  {
    double worst_eta = std::numeric_limits<double>::infinity();
    double worst_lam = std::numeric_limits<double>::infinity();
    const double fscale = std::max(1.0, f.cwiseAbs().maxCoeff());
    for (int i = 0; i + 1 < n; ++i) {
      // with eta ascending, dF/d eta must be nonincreasing and dF/d kappa
      // nondecreasing along i
      worst_eta = std::min(worst_eta, (f[i] - f[i + 1]) / fscale);
      worst_lam = std::min(worst_lam, (glam[i + 1] - glam[i]) / fscale);
    }
    out.grad_eta_monotone = worst_eta;
    out.grad_lambda_monotone = worst_lam;
  }

  // Calibration ratios for the gradient chain (k < n case).
  {
    out.min_grad_ratio = glam.minCoeff() / fsum;
    const double alpha = 1.0 - 1.0 / (k - l);
    out.sum_grad_vs_power = fsum / std::pow(qj.value, alpha);
  }
  return out;
}

Vec projected_eigenvalues(const Mat& r, const Vec& p) {
  const int n = static_cast<int>(r.rows());
  Mat proj_sqrt = Mat::Identity(n, n);
  const double p2 = p.squaredNorm();
  if (p2 > 0.0) {
    const double scale = 1.0 / std::sqrt(1.0 + p2) - 1.0;
    proj_sqrt += (scale / p2) * (p * p.transpose());
  }
  const Mat sym = proj_sqrt * r * proj_sqrt;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sym + sym.transpose()));
  return es.eigenvalues();
}

ProjectionSlacks check_projection_inequality(const Mat& r, const Vec& p, int k,
                                             int l) {
  const int n = static_cast<int>(r.rows());
  if (!(0 <= l && l < k && k + 1 <= n)) {
    throw std::domain_error(
        "check_projection_inequality: need 0 <= l < k and k+1 <= n");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (r + r.transpose()));
  const Vec lam_r = es.eigenvalues();
  const ConeResult cone = in_cone(lam_r, {k + 1, 0, ConeKind::gamma});
  if (!cone.inside) {
    throw std::domain_error(
        "check_projection_inequality: lambda(r) outside Gamma_{k+1}");
  }
  const Vec lam_rp = projected_eigenvalues(r, p);
  ProjectionSlacks out;
  out.cone_slack = in_cone(lam_rp, {k, 0, ConeKind::gamma}).margin;
  const double lhs = quotient_jet(lam_r, k, l).value / (1.0 + p.squaredNorm());
  const double rhs = quotient_jet(lam_rp, k, l).value;
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  out.quotient_slack = (rhs - lhs) / scale;
  return out;
}

}  // namespace hq
