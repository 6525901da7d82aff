#pragma once

#include "hq/pde_operator.hpp"

#include <limits>
#include <string>
#include <vector>

namespace hq {

struct SolverConfig {
  double newton_tol = 1e-8;        // residual sup-norm target
  int max_iters = 50;              // per epsilon stage
  double backtrack = 0.5;
  int max_halvings = 30;
  std::vector<double> eps_schedule = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 0.0};
  double cone_margin_floor = 1e-12;
  int threads = 1;
  bool verbose = false;
  void validate() const;
};

struct StageReport {
  double eps = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;  // sup norms, starting value included
  double final_residual = std::numeric_limits<double>::infinity();
  std::string failure;  // empty when converged
  double min_margin = 0.0;
  FieldNorms norms_all;
  FieldNorms norms_interior;   // boundary distance > 3h
  FieldNorms norms_boundary;   // boundary distance <= 3h
  double ordering_vs_subsolution = 0.0;  // max(u_sub - u), expect <= 0
  double ordering_vs_zero = 0.0;         // max(u), expect <= 0
};

struct SolveReport {
  bool success = false;
  double final_residual = std::numeric_limits<double>::infinity();
  double subsolution_scale = 0.0;
  double wall_time_sec = 0.0;
  std::vector<StageReport> stages;
  Field final_field;
  Field subsolution;
};

/// Evaluation of the residual over all interior nodes. admissible is true
/// only if every node keeps a cone margin above the floor.
struct SweepResult {
  bool admissible = false;
  double min_margin = std::numeric_limits<double>::infinity();
  Vec residual;  // per unknown
  double sup = std::numeric_limits<double>::infinity();
};

SweepResult residual_sweep(const Field& u, const OperatorSpec& spec,
                           const PsiModel& psi, double margin_floor,
                           int threads = 1);

/// Admissible start u_(x) = t (q(x) - q_boundary), q = |x|^2 for the disc
/// and a smoothed sup-norm square for the square, with t found by a
/// doubling scan plus bisection as the smallest scale giving nonnegative
/// discrete residual and admissibility everywhere.
Field builtin_subsolution(std::shared_ptr<const Grid> grid,
                          const OperatorSpec& spec, const PsiModel& psi,
                          double* scale_out = nullptr);

/// One damped Newton stage at fixed psi (already regularized). Returns the
/// converged field in `u` and the stage log. Backtracking accepts a step
/// only if every node stays admissible (margin >= floor) and the residual
/// sup-norm decreases.
StageReport newton_stage(Field& u, const OperatorSpec& spec,
                         const PsiModel& psi, const SolverConfig& cfg);

SolveReport solve(const DomainSpec& dom, int m, const OperatorSpec& spec,
                  const PsiModel& psi, const SolverConfig& cfg,
                  const Field* user_subsolution = nullptr);

}  // namespace hq
