#include "hq/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <thread>
#include <vector>

namespace hq {

void SolverConfig::validate() const {
  if (newton_tol <= 0.0) throw ConfigError("solver: newton_tol must be > 0");
  if (max_iters < 1) throw ConfigError("solver: max_iters must be >= 1");
  if (eps_schedule.empty()) {
    throw ConfigError("solver: eps_schedule must not be empty");
  }
  for (size_t i = 0; i < eps_schedule.size(); ++i) {
    if (eps_schedule[i] < 0.0) {
      throw ConfigError("solver: eps_schedule entries must be >= 0");
    }
    if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1])) {
      throw ConfigError("solver: eps_schedule must be strictly decreasing");
    }
  }
}

namespace {

void parallel_over(int count, int threads, const std::function<void(int, int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SweepResult residual_sweep(const Field& u, const OperatorSpec& spec,
                           const PsiModel& psi, double margin_floor,
                           int threads) {
  const Grid& g = *u.grid;
  const int N = g.num_interior();
  SweepResult out;
  out.residual.resize(N);
  std::vector<double> margins(static_cast<size_t>(N));

  parallel_over(N, threads, [&](int lo, int hi) {
    for (int id = lo; id < hi; ++id) {
      const int lin = g.interior_node(id);
      const GraphJet jet = jet_at(u, lin);
      const SurfaceData s = surface_data(jet);
      const ConeResult cone =
          in_cone(s.kappa, {spec.k, spec.l, ConeKind::gamma_tilde});
      margins[static_cast<size_t>(id)] = cone.margin;
      if (cone.margin >= margin_floor) {
        const double G = quotient_jet(s.eta_eigs, spec.k, spec.l).value;
        out.residual[id] = G - psi.value(jet.x, jet.u, s.nu);
      } else {
        out.residual[id] = std::numeric_limits<double>::quiet_NaN();
      }
    }
  });

  out.min_margin = *std::min_element(margins.begin(), margins.end());
  out.admissible = out.min_margin >= margin_floor;
  out.sup = 0.0;
  if (out.admissible) {
    for (int id = 0; id < N; ++id) {
      out.sup = std::max(out.sup, std::abs(out.residual[id]));
    }
  } else {
    out.sup = std::numeric_limits<double>::infinity();
  }
  return out;
}

namespace {

Field scaled_bowl(std::shared_ptr<const Grid> grid, double t) {
  const Grid& g = *grid;
  const double R = g.dom.size;
  double q_boundary;
  std::function<double(const Vec&)> q;
  if (g.dom.shape == Shape::disc) {
    q = [](const Vec& x) { return x.squaredNorm(); };
    q_boundary = R * R;
  } else {
    // smoothed sup-norm square; boundary max sits at the corners
    q = [](const Vec& x) {
      double s = 0.0;
      for (int a = 0; a < x.size(); ++a) s += std::pow(x[a], 8);
      return std::pow(s, 0.25);
    };
    q_boundary = std::pow(static_cast<double>(g.dim()), 0.25) * R * R;
  }
  return sample_field(std::move(grid),
                      [&](const Vec& x) { return t * (q(x) - q_boundary); });
}

}  // namespace

Field builtin_subsolution(std::shared_ptr<const Grid> grid,
                          const OperatorSpec& spec, const PsiModel& psi,
                          double* scale_out) {
  const double t_floor = 1e-4;
  const double t_max = 1e6;

  auto feasible = [&](double t) {
    const Field f = scaled_bowl(grid, t);
    const SweepResult sw = residual_sweep(f, spec, psi, kConeTol);
    if (!sw.admissible) return false;
    return sw.residual.minCoeff() >= 0.0;
  };

  double t_ok = -1.0, t_bad = -1.0;
  for (double t = t_floor; t <= t_max; t *= 2.0) {
    if (feasible(t)) {
      t_ok = t;
      break;
    }
    t_bad = t;
  }
  if (t_ok < 0.0) {
    throw std::runtime_error(
        "builtin_subsolution: no admissible subsolution with nonnegative "
        "residual up to scale 1e6; shrink the domain or the right-hand side");
  }
  if (t_bad > 0.0) {
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (t_ok + t_bad);
      if (feasible(mid)) {
        t_ok = mid;
      } else {
        t_bad = mid;
      }
    }
  }
  if (scale_out != nullptr) *scale_out = t_ok;
  return scaled_bowl(grid, t_ok);
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

void assemble_jacobian(const Field& u, const OperatorSpec& spec,
                       const PsiModel& psi, int threads, SpMat& J) {
  const Grid& g = *u.grid;
  const int N = g.num_interior();
  const int n = g.dim();

  std::vector<std::vector<Eigen::Triplet<double>>> parts(
      static_cast<size_t>(std::max(1, threads)));
  const int chunk = (N + std::max(1, threads) - 1) / std::max(1, threads);

  parallel_over(N, threads, [&](int lo, int hi) {
    auto& trip = parts[static_cast<size_t>(lo / std::max(1, chunk))];
    for (int id = lo; id < hi; ++id) {
      const int lin = g.interior_node(id);
      const GraphJet jet = jet_at(u, lin);
      const LinearizationData lind = linearize(jet, spec, psi);
      const Grid::NodeStencil& st = g.stencil(id);

      trip.emplace_back(id, id, -lind.psi_z);
      for (int a = 0; a < n; ++a) {
        const double c = lind.Gs[a] - lind.psi_p[a];
        for (const auto& e : st.du[static_cast<size_t>(a)]) {
          trip.emplace_back(id, e.id, c * e.w);
        }
      }
      for (int b = 0; b < n; ++b) {
        for (int a = 0; a <= b; ++a) {
          const double c = (a == b) ? lind.Gij(a, a) : 2.0 * lind.Gij(a, b);
          for (const auto& e : st.d2u[static_cast<size_t>(b * (b + 1) / 2 + a)]) {
            trip.emplace_back(id, e.id, c * e.w);
          }
        }
      }
    }
  });

  std::vector<Eigen::Triplet<double>> all;
  size_t total = 0;
  for (const auto& p : parts) total += p.size();
  all.reserve(total);
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  J.resize(N, N);
  J.setFromTriplets(all.begin(), all.end());
}

FieldNorms band_or_all(const Field& f, int which, double band) {
  switch (which) {
    case 0: return discrete_norms(f);
    case 1: return discrete_norms_band(f, false, band);
    default: return discrete_norms_band(f, true, band);
  }
}

}  // namespace

StageReport newton_stage(Field& u, const OperatorSpec& spec,
                         const PsiModel& psi, const SolverConfig& cfg) {
  StageReport rep;
  rep.eps = psi.epsilon();

  SweepResult cur = residual_sweep(u, spec, psi, cfg.cone_margin_floor,
                                   cfg.threads);
  if (!cur.admissible) {
    rep.failure = "initial iterate not admissible";
    rep.min_margin = cur.min_margin;
    return rep;
  }
  rep.residual_history.push_back(cur.sup);

  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  SpMat J;
  Vec u_int = pack_interior(u);
  Field cand = u;

  while (rep.iterations < cfg.max_iters && cur.sup > cfg.newton_tol) {
    assemble_jacobian(u, spec, psi, cfg.threads, J);
    lu.compute(J);
    if (lu.info() != Eigen::Success) {
      rep.failure = "sparse LU factorization failed";
      break;
    }
    const Vec delta = lu.solve(-cur.residual);
    if (lu.info() != Eigen::Success) {
      rep.failure = "sparse solve failed";
      break;
    }

    double step = 1.0;
    bool accepted = false;
    SweepResult next;
    for (int halving = 0; halving <= cfg.max_halvings; ++halving) {
      unpack_interior(u_int + step * delta, cand);
      next = residual_sweep(cand, spec, psi, cfg.cone_margin_floor,
                            cfg.threads);
      // admissibility first, then residual decrease
      if (next.admissible && next.sup < cur.sup) {
        accepted = true;
        break;
      }
      step *= cfg.backtrack;
    }
    if (!accepted) {
      rep.failure = "line search stalled";
      break;
    }
    u_int += step * delta;
    unpack_interior(u_int, u);
    cur = next;
    ++rep.iterations;
    rep.residual_history.push_back(cur.sup);
    if (cfg.verbose) {
      std::cout << "  eps=" << psi.epsilon() << " iter=" << rep.iterations
                << " step=" << step << " res=" << cur.sup << "\n";
    }
  }

  rep.final_residual = cur.sup;
  rep.min_margin = cur.min_margin;
  rep.converged = cur.sup <= cfg.newton_tol;
  if (!rep.converged && rep.failure.empty()) {
    rep.failure = "max iterations reached";
  }
  return rep;
}

SolveReport solve(const DomainSpec& dom, int m, const OperatorSpec& spec,
                  const PsiModel& psi, const SolverConfig& cfg,
                  const Field* user_subsolution) {
  spec.validate();
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  auto grid = std::make_shared<const Grid>(build_grid(dom, m));
  SolveReport rep;

  const PsiModel psi_first = regularize(psi, cfg.eps_schedule.front());
  if (user_subsolution != nullptr) {
    rep.subsolution = *user_subsolution;
    const SweepResult sw = residual_sweep(rep.subsolution, spec, psi_first,
                                          cfg.cone_margin_floor, cfg.threads);
    if (!sw.admissible) {
      throw std::runtime_error("solve: user subsolution is not admissible");
    }
    if (sw.residual.minCoeff() < -1e-8) {
      throw std::runtime_error(
          "solve: user subsolution violates the subsolution inequality");
    }
    rep.subsolution_scale = 0.0;
  } else {
    rep.subsolution =
        builtin_subsolution(grid, spec, psi_first, &rep.subsolution_scale);
  }

  Field u = rep.subsolution;
  rep.final_field = u;
  rep.success = true;
  const double band = 3.0 * grid->h;

  for (double eps : cfg.eps_schedule) {
    const PsiModel psi_eps = regularize(psi, eps);
    Field trial = u;
    StageReport stage = newton_stage(trial, spec, psi_eps, cfg);
    stage.eps = eps;
    if (stage.converged) {
      u = trial;
      rep.final_field = u;
      rep.final_residual = stage.final_residual;
      stage.norms_all = band_or_all(u, 0, band);
      stage.norms_interior = band_or_all(u, 1, band);
      stage.norms_boundary = band_or_all(u, 2, band);
      double vs_sub = -std::numeric_limits<double>::infinity();
      double vs_zero = -std::numeric_limits<double>::infinity();
      for (int id = 0; id < grid->num_interior(); ++id) {
        const int lin = grid->interior_node(id);
        vs_sub = std::max(vs_sub, rep.subsolution.values[lin] - u.values[lin]);
        vs_zero = std::max(vs_zero, u.values[lin]);
      }
      stage.ordering_vs_subsolution = vs_sub;
      stage.ordering_vs_zero = vs_zero;
    }
    rep.stages.push_back(stage);
    if (!stage.converged) {
      if (eps > 0.0) rep.success = false;
      break;  // the last positive-eps solution stands for a failed eps=0 try
    }
  }
  if (rep.stages.empty() || !rep.stages.front().converged) rep.success = false;

  rep.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace hq
