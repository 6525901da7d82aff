#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>

namespace hq {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Thrown when an argument leaves the cone required by an operation.
/// Carries the offending margin (min of the tested sigma values).
class ConeViolation : public std::runtime_error {
 public:
  ConeViolation(const std::string& what, double margin)
      : std::runtime_error(what), margin_(margin) {}
  double margin() const { return margin_; }

 private:
  double margin_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Boundary points are classified as outside; callers get the raw margin and
// can apply their own slack policy.
inline constexpr double kConeTol = 1e-12;

enum class ConeKind { gamma, gamma_tilde };

struct ConeQuery {
  int k = 1;
  int l = 0;
  ConeKind kind = ConeKind::gamma;
};

struct ConeResult {
  bool inside = false;
  double margin = 0.0;  // min over sigma_1..sigma_k of the tested vector
};

/// Elementary symmetric function sigma_k of the entries of lam.
/// sigma_0 == 1, sigma_n == product of entries. Entries are summed in
/// sorted order so permutations of lam give bit-identical results.
double sigma(int k, const Vec& lam);

/// sigma_{k-1}(lam | i): sigma_{k-1} with entry i removed, which equals
/// the partial derivative of sigma_k with respect to lam[i].
double sigma_partial(int k, const Vec& lam, int i);

/// sigma_{k-2}(lam | ij): second partial of sigma_k. Zero for i == j.
double sigma_partial2(int k, const Vec& lam, int i, int j);

/// Binomial coefficient as a double (n small).
double binomial(int n, int k);

/// The linear map lambda_i = sum_{j != i} kappa_j.
Vec eta_map(const Vec& kappa);

/// Cone membership test. gamma tests sigma_1..sigma_k of the input itself;
/// gamma_tilde applies eta_map first (input treated as a curvature vector).
ConeResult in_cone(const Vec& v, const ConeQuery& q);

struct QuotientJet {
  double value = 0.0;       // sigma_k / sigma_l
  Vec grad;                 // d(value)/d lam_i
  std::optional<Mat> hess;  // d2(value)/d lam_i d lam_j
};

/// Value and derivatives of sigma_k/sigma_l at lam. Requires sigma_l > 0
/// when l >= 1 (throws ConeViolation otherwise). Does not sort its input:
/// grad[i] corresponds to lam[i].
QuotientJet quotient_jet(const Vec& lam, int k, int l, bool want_hess = false);

/// Generalized Newton-MacLaurin slack:
///   [ (sigma_r/C_n^r) / (sigma_s/C_n^s) ]^{1/(r-s)}
/// - [ (sigma_k/C_n^k) / (sigma_l/C_n^l) ]^{1/(k-l)}.
/// Nonnegative for lam in Gamma_k. Preconditions n >= k > l >= 0,
/// n >= r > s >= 0, k >= r, l >= s enforced with std::domain_error.
double check_newton_maclaurin(const Vec& lam, int k, int l, int r, int s);

/// Signed slacks for the ordered-cone inequalities evaluated at a single
/// curvature vector kappa in Gamma~_k. Slacks of inequality checks are
/// normalized by max(1, |lhs|, |rhs|); ratio fields are raw and must be
/// strictly positive (their infima over samples calibrate the constants
/// the statements only assert to exist).
struct ConeChecks {
  double gamma1_margin = 0.0;         // sigma_1(kappa), cone chain upper end
  double grad_lower_bound = 0.0;      // quotient gradient lower bound
  double concavity_form = 0.0;        // concavity quadratic form vs rank-one bound
  double eta_sorted = 0.0;            // eta ascending when kappa descending
  double eta_pos = 0.0;               // eta_{n-k+1} > 0 margin
  double partial_ratio = 0.0;         // sigma_{k-1}(eta|n-k+1) / sigma_{k-1}(eta)
  double grad_eta_monotone = 0.0;     // dF/d eta_i nonincreasing
  double grad_lambda_monotone = 0.0;  // dF/d lambda_i nondecreasing
  double min_grad_ratio = 0.0;        // min_i dF/d lambda_i / sum_i dF/d lambda_i
  double sum_grad_vs_power = 0.0;     // sum_i dF/d lambda_i / F^{1-1/(k-l)}
  double worst_slack() const;         // min over the >= 0 checks
};

ConeChecks check_cone_inequalities(const Vec& kappa, int k, int l,
                                   const Vec* xi = nullptr);

struct ProjectionSlacks {
  double cone_slack = 0.0;      // margin of lambda(r,p) in Gamma_k
  double quotient_slack = 0.0;  // F(lambda(r,p)) - F(lambda(r))/(1+|p|^2)
};

/// Projection inequality: with lambda(r) in Gamma_{k+1} and
/// lambda(r,p) = lambda((I - p p^T/(1+|p|^2)) r), both slacks are >= 0.
ProjectionSlacks check_projection_inequality(const Mat& r, const Vec& p, int k,
                                             int l);

/// Eigenvalues of (I - p p^T/(1+|p|^2)) r, ascending (real since the
/// projector is SPD; computed via its symmetric square root).
Vec projected_eigenvalues(const Mat& r, const Vec& p);

}  // namespace hq
