#include "hq/property_suite.hpp"

#include "hq/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <thread>

namespace hq {

namespace {

constexpr int kShards = 64;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_vec(const char* label, const Vec& v) {
  std::string out(label);
  out += "=[";
  char buf[32];
  for (int i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    if (i) out += ",";
    out += buf;
  }
  out += "]";
  return out;
}

struct Accum {
  double worst = kInf;
  long worst_index = -1;
  std::string worst_sample;
  double calib = kInf;
  int count = 0;

  void add(double slack, long idx, const std::string& sample) {
    ++count;
    if (slack < worst || (slack == worst && worst_index < 0)) {
      worst = slack;
      worst_index = idx;
      worst_sample = sample;
    }
  }
  void add_calibrated(double ratio, long idx, const std::string& sample) {
    add(ratio, idx, sample);
    calib = std::min(calib, ratio);
  }
  void merge(const Accum& o) {
    count += o.count;
    calib = std::min(calib, o.calib);
    if (o.worst < worst ||
        (o.worst == worst && o.worst_index >= 0 &&
         (worst_index < 0 || o.worst_index < worst_index))) {
      worst = o.worst;
      worst_index = o.worst_index;
      worst_sample = o.worst_sample;
    }
  }
};

double rel_dev(double lhs, double rhs) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return -std::abs(lhs - rhs) / scale;
}

double rel_ge(double smaller, double larger) {
  const double scale = std::max({1.0, std::abs(smaller), std::abs(larger)});
  return (larger - smaller) / scale;
}

enum CheckId {
  id_partials_sum = 0,
  id_euler,
  maclaurin_interp,
  maclaurin_first_power,
  gamma_nesting,
  partials_positive,
  deletion_recursion,
  grad_sum_bound,
  root_concavity,
  partials_monotone,
  newton_maclaurin,
  tilde_convexity,
  tilde_chain_upper,
  tilde_chain_lower,
  tilde_grad_lower,
  tilde_concavity,
  eta_ordering,
  eta_partial_ratio,
  grad_eta_monotone_id,
  grad_kappa_monotone_id,
  min_grad_ratio_id,
  grad_sum_power_id,
  projection_cone_id,
  projection_quotient_id,
  kNumChecks
};

struct CheckDef {
  const char* name;
  bool calibrated;
};

const CheckDef kDefs[kNumChecks] = {
    {"partials_sum_identity", false},
    {"euler_homogeneity_identity", false},
    {"maclaurin_interpolation_constant", true},
    {"maclaurin_first_power_constant", true},
    {"gamma_cone_nesting", false},
    {"partials_positive_in_gamma_k", false},
    {"deletion_recursion_identity", false},
    {"quotient_root_grad_sum_bound", false},
    {"quotient_root_concavity", false},
    {"partials_monotone_under_sorting", false},
    {"newton_maclaurin_inequality", false},
    {"tilde_cone_convexity", false},
    {"tilde_cone_nesting_in_gamma1", false},
    {"gamma2_inside_tilde_cones", false},
    {"tilde_grad_lower_bound", false},
    {"tilde_concavity_quadratic_form", false},
    {"eta_ordering_and_positivity", false},
    {"eta_partial_ratio_constant", true},
    {"grad_eta_monotone", false},
    {"grad_kappa_monotone", false},
    {"min_grad_ratio_constant", true},
    {"grad_sum_vs_value_power_constant", true},
    {"projection_cone", false},
    {"projection_quotient", false},
};

struct ShardResult {
  Accum acc[kNumChecks];
};

void run_shard(const SuiteConfig& cfg, int shard, ShardResult& out) {
  const int n = cfg.n, k = cfg.k, l = cfg.l;
  const int per = cfg.samples / kShards + (shard < cfg.samples % kShards ? 1 : 0);
  const long base = static_cast<long>(shard) * (cfg.samples / kShards) +
                    std::min<long>(shard, cfg.samples % kShards);
  const int alpha_den = k - l;
  const double alpha = 1.0 / alpha_den;

  // --- Gamma_k stream: summation identities and symmetric-function facts ---
  {
    Rng rng(mix_seed(cfg.seed, "gamma", static_cast<uint64_t>(shard)));
    for (int s = 0; s < per; ++s) {
      const long idx = base + s;
      const Vec lam = (idx == 0)
                          ? Vec::Ones(n)
                          : sample_cone_point(rng, n, {k, 0, ConeKind::gamma});
      const std::string tag = fmt_vec("lambda", lam);

      // sum-of-partials identity, optionally corrupted for the self check
      {
        int kk = k;
        if (cfg.corrupt_sigma) kk = (k < n) ? k + 1 : k - 1;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += sigma_partial(kk, lam, i);
        out.acc[id_partials_sum].add(rel_dev(sum, (n - k + 1) * sigma(k - 1, lam)), idx, tag);
      }
      // Euler homogeneity identity
      {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += lam[i] * sigma_partial(k, lam, i);
        out.acc[id_euler].add(rel_dev(sum, k * sigma(k, lam)), idx, tag);
      }
      // Maclaurin-type interpolation bounds, calibrated infima
      if (k >= 2) {
        const double s1 = sigma(1, lam);
        const double sk = sigma(k, lam);
        const double skm1 = sigma(k - 1, lam);
        const double denom = std::pow(sk, 1.0 - 1.0 / (k - 1)) *
                             std::pow(s1, 1.0 / (k - 1));
        out.acc[maclaurin_interp].add_calibrated(skm1 / denom, idx, tag);
        out.acc[maclaurin_first_power].add_calibrated(s1 / std::pow(sk, 1.0 / k), idx, tag);
      }
      // cone nesting
      {
        double worst = kInf;
        for (int j = 1; j <= k; ++j) {
          worst = std::min(worst, in_cone(lam, {j, 0, ConeKind::gamma}).margin);
        }
        out.acc[gamma_nesting].add(worst, idx, tag);
      }
      // partial positivity
      {
        double worst = kInf;
        for (int i = 0; i < n; ++i) {
          worst = std::min(worst, sigma_partial(k, lam, i));
        }
        out.acc[partials_positive].add(worst, idx, tag);
      }
      // deletion recursion; sigma_k of the deleted vector is 0 when k = n
      {
        double worst = 0.0;
        const double sk = sigma(k, lam);
        for (int i = 0; i < n; ++i) {
          Vec rest(n - 1);
          int w = 0;
          for (int j = 0; j < n; ++j) {
            if (j != i) rest[w++] = lam[j];
          }
          const double deleted = (k <= n - 1) ? sigma(k, rest) : 0.0;
          const double rhs = deleted + lam[i] * sigma_partial(k, lam, i);
          worst = std::min(worst, rel_dev(sk, rhs));
        }
        out.acc[deletion_recursion].add(worst, idx, tag);
      }
      // gradient sum bound and concavity of the quotient root
      {
        const QuotientJet qj = quotient_jet(lam, k, l, true);
        const double fa = std::pow(qj.value, alpha);
        const double sum_root_grad = alpha * fa / qj.value * qj.grad.sum();
        const double bound = std::pow(binomial(n, k) / binomial(n, l), alpha);
        out.acc[grad_sum_bound].add(rel_ge(bound, sum_root_grad), idx, tag);

        Vec xi(n);
        for (int i = 0; i < n; ++i) xi[i] = (idx == 0) ? 1.0 : rng.normal();
        const double gdot = qj.grad.dot(xi);
        const double hquad = xi.dot(*qj.hess * xi);
        const double quad = alpha * fa / qj.value * hquad +
                            alpha * (alpha - 1.0) * fa / (qj.value * qj.value) *
                                gdot * gdot;
        const double scale = std::max(
            {1.0, std::abs(alpha * fa / qj.value * hquad),
             std::abs(alpha * (alpha - 1.0) * fa / (qj.value * qj.value)) *
                 gdot * gdot});
        out.acc[root_concavity].add(-quad / scale, idx,
                              tag + " " + fmt_vec("xi", xi));
      }
      // sorted monotonicity of the partials
      {
        Vec sorted = lam;
        std::sort(sorted.data(), sorted.data() + n, std::greater<double>());
        double worst = kInf;
        double scale = 1.0;
        Vec parts(n);
        for (int i = 0; i < n; ++i) {
          parts[i] = sigma_partial(k, sorted, i);
          scale = std::max(scale, std::abs(parts[i]));
        }
        for (int i = 0; i + 1 < n; ++i) {
          worst = std::min(worst, (parts[i + 1] - parts[i]) / scale);
        }
        out.acc[partials_monotone].add(worst, idx, tag);
      }
      // generalized Newton-MacLaurin over the admissible order pairs
      {
        double worst = kInf;
        for (int r = 1; r <= k; ++r) {
          for (int s2 = 0; s2 <= std::min(l, r - 1); ++s2) {
            if (r == k && s2 == l) continue;
            worst = std::min(worst, check_newton_maclaurin(lam, k, l, r, s2));
          }
        }
        if (worst < kInf) out.acc[newton_maclaurin].add(worst, idx, tag);
      }
    }
  }

  // --- Gamma~_k stream: cone facts of the transformed variable ---
  {
    Rng rng(mix_seed(cfg.seed, "tilde", static_cast<uint64_t>(shard)));
    for (int s = 0; s < per; ++s) {
      const long idx = base + s;
      const Vec kappa =
          (idx == 0) ? Vec::Ones(n)
                     : sample_cone_point(rng, n, {k, 0, ConeKind::gamma_tilde});
      const Vec kappa2 =
          sample_cone_point(rng, n, {k, 0, ConeKind::gamma_tilde});
      Vec xi(n);
      for (int i = 0; i < n; ++i) xi[i] = (idx == 0) ? 1.0 : rng.normal();
      const std::string tag = fmt_vec("kappa", kappa);

      {
        const Vec mid = 0.5 * (kappa + kappa2);
        out.acc[tilde_convexity].add(
            in_cone(mid, {k, 0, ConeKind::gamma_tilde}).margin, idx,
            tag + " " + fmt_vec("kappa2", kappa2));
      }
      {
        double worst = kInf;
        for (int j = 1; j <= k; ++j) {
          worst = std::min(worst,
                           in_cone(kappa, {j, 0, ConeKind::gamma_tilde}).margin);
        }
        worst = std::min(worst, in_cone(kappa, {1, 0, ConeKind::gamma}).margin);
        out.acc[tilde_chain_upper].add(worst, idx, tag);
      }

      const ConeChecks cc = check_cone_inequalities(kappa, k, l, &xi);
      const std::string tag_xi = tag + " " + fmt_vec("xi", xi);
      out.acc[tilde_grad_lower].add(cc.grad_lower_bound, idx, tag);
      out.acc[tilde_concavity].add(cc.concavity_form, idx, tag_xi);
      out.acc[eta_ordering].add(std::min(cc.eta_sorted, cc.eta_pos), idx, tag);
      out.acc[eta_partial_ratio].add_calibrated(cc.partial_ratio, idx, tag);
      out.acc[grad_eta_monotone_id].add(cc.grad_eta_monotone, idx, tag);
      out.acc[grad_kappa_monotone_id].add(cc.grad_lambda_monotone, idx, tag);

      if (k < n) {
        // gradient ratio chain tested on |kappa| = 1 normalized samples
        const Vec unit = kappa / kappa.norm();
        const ConeChecks cu = check_cone_inequalities(unit, k, l, &xi);
        out.acc[min_grad_ratio_id].add_calibrated(cu.min_grad_ratio, idx,
                                                  fmt_vec("kappa", unit));
        out.acc[grad_sum_power_id].add_calibrated(cu.sum_grad_vs_power, idx,
                                                   fmt_vec("kappa", unit));
      }
    }
  }

  // --- Gamma_2 stream: lower end of the cone chain ---
  {
    Rng rng(mix_seed(cfg.seed, "gamma2", static_cast<uint64_t>(shard)));
    for (int s = 0; s < per; ++s) {
      const long idx = base + s;
      const Vec mu = (idx == 0)
                         ? Vec::Ones(n)
                         : sample_cone_point(rng, n, {2, 0, ConeKind::gamma});
      double worst = in_cone(mu, {n, 0, ConeKind::gamma_tilde}).margin;
      worst = std::min(worst, in_cone(mu, {k, 0, ConeKind::gamma_tilde}).margin);
      out.acc[tilde_chain_lower].add(worst, idx, fmt_vec("mu", mu));
    }
  }

  // --- projection stream: gradient projection inequality ---
  if (k + 1 <= n && k < n) {
    Rng rng(mix_seed(cfg.seed, "proj", static_cast<uint64_t>(shard)));
    for (int s = 0; s < per; ++s) {
      const long idx = base + s;
      Mat r;
      if (idx == 0) {
        r = Mat::Identity(n, n);
      } else {
        r = sample_symmetric_in_cone(rng, n, k + 1);
      }
      const Vec p = (idx == 0) ? Vec::Zero(n) : sample_ball(rng, n, 2.0);
      const ProjectionSlacks ps = check_projection_inequality(r, p, k, l);
      Eigen::SelfAdjointEigenSolver<Mat> es(r);
      const std::string tag =
          fmt_vec("eigs_r", es.eigenvalues()) + " " + fmt_vec("p", p);
      out.acc[projection_cone_id].add(ps.cone_slack, idx, tag);
      out.acc[projection_quotient_id].add(ps.quotient_slack, idx, tag);
    }
  }
}

}  // namespace

SuiteReport run_property_suite(const SuiteConfig& cfg) {
  if (cfg.n < 2 || cfg.k < 1 || cfg.k > cfg.n || cfg.l < 0 || cfg.l >= cfg.k) {
    throw ConfigError("property suite: invalid (n, k, l)");
  }
  if (cfg.samples < 1) throw ConfigError("property suite: samples must be >= 1");

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ShardResult> shards(kShards);

  const int threads = std::max(1, std::min(cfg.threads, kShards));
  if (threads == 1) {
    for (int s = 0; s < kShards; ++s) run_shard(cfg, s, shards[static_cast<size_t>(s)]);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t]() {
        for (int s = t; s < kShards; s += threads) {
          run_shard(cfg, s, shards[static_cast<size_t>(s)]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  SuiteReport rep;
  rep.cfg = cfg;
  rep.worst_slack = kInf;
  rep.pass = true;
  for (int c = 0; c < kNumChecks; ++c) {
    Accum total;
    for (const auto& sh : shards) total.merge(sh.acc[c]);
    if (total.count == 0) continue;  // check not applicable at this (n,k,l)
    CheckResult res;
    res.name = kDefs[c].name;
    res.count = total.count;
    res.worst_slack = total.worst;
    res.worst_index = total.worst_index;
    res.worst_sample = total.worst_sample;
    res.calibrated = kDefs[c].calibrated;
    res.calibrated_constant = kDefs[c].calibrated ? total.calib : 0.0;
    res.pass = total.worst >= kSuiteSlackFloor &&
               (!res.calibrated || res.calibrated_constant > 0.0);
    rep.pass = rep.pass && res.pass;
    rep.worst_slack = std::min(rep.worst_slack, res.worst_slack);
    rep.checks.push_back(std::move(res));
  }
  rep.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace hq
