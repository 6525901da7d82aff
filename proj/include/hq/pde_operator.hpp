#pragma once

#include "hq/exact_fields.hpp"
#include "hq/grid.hpp"
#include "hq/hypersurface.hpp"

#include <vector>

namespace hq {

struct OperatorSpec {
  int n = 2;
  int k = 1;
  int l = 0;
  int power() const { return k - l; }
  void validate() const {
    if (n < 2) throw ConfigError("operator: dimension n must be >= 2");
    if (!(0 <= l && l < k && k < n)) {
      throw ConfigError("operator: orders must satisfy 0 <= l < k < n");
    }
  }
};

/// Right-hand side model psi(x, z, nu) >= 0 with psi_z >= 0, carrying the
/// regularization level. The regularized value is
///   psi_eps = (psi^{1/q} + eps)^q with q = k - l,
/// so psi_0 = psi and psi_eps is monotone increasing in eps.
class PsiModel {
 public:
  enum class Kind { constant, radial_bump, normal_dependent, manufactured };

  static PsiModel constant(double c, int power);
  /// psi^{1/q} = amp * max(0, |x| - r0)^2, a C^{1,1} bump vanishing on the
  /// inner ball |x| <= r0.
  static PsiModel radial_bump(double amp, double r0, int power);
  /// psi = p0 + p1 (1 + nu_{n+1}) + p2 exp(z); all coefficients >= 0.
  static PsiModel normal_dependent(double p0, double p1, double p2, int power);
  /// Tabulated values over the lattice of `grid`, cubic interpolation
  /// off-node; psi_z = 0 and psi_nu = 0.
  static PsiModel from_table(const Grid& grid, std::vector<double> table,
                             int power);

  Kind kind() const { return kind_; }
  int power() const { return power_; }
  double epsilon() const { return eps_; }
  PsiModel with_epsilon(double eps) const;

  /// Unregularized psi.
  double base(const Vec& x, double z, const Vec& nu) const;
  /// Regularized psi_eps.
  double value(const Vec& x, double z, const Vec& nu) const;
  /// Derivatives of psi_eps.
  double dz(const Vec& x, double z, const Vec& nu) const;
  Vec dx(const Vec& x, double z, const Vec& nu) const;
  /// Directional derivative of psi_eps along a tangent direction w of the
  /// unit sphere at nu (numeric, central step 1e-6).
  double dnu_dir(const Vec& x, double z, const Vec& nu, const Vec& w) const;

  std::string describe() const;

 private:
  PsiModel() = default;
  double chain_factor(const Vec& x, double z, const Vec& nu) const;
  double interpolate(const Vec& x) const;

  Kind kind_ = Kind::constant;
  std::vector<double> params_;
  int power_ = 1;
  double eps_ = 0.0;
  // table data (manufactured)
  int table_m = 0;
  int table_dim = 0;
  double table_size = 0.0;
  std::vector<double> table_;
};

PsiModel regularize(const PsiModel& psi, double eps);

/// G(r, p) = sigma_k/sigma_l of the eta-eigenvalues of the graph with
/// Hessian r and gradient p. Throws ConeViolation off the admissible set.
double g_value(const Mat& d2u, const Vec& du, const OperatorSpec& spec);

/// G(D2u, Du) - psi_eps(x, u, nu) at a jet. Throws ConeViolation (with the
/// margin) when the jet is not admissible.
double residual(const GraphJet& jet, const OperatorSpec& spec,
                const PsiModel& psi);

struct LinearizationData {
  Mat Gij;      // dG/dr_ij in the trace pairing: dG = sum_ij Gij dr_ij
  Vec Gs;       // dG/dp_s
  double psi_z = 0.0;  // d psi_eps / dz
  Vec psi_p;    // d psi_eps / dp_s through the normal chart
};

LinearizationData linearize(const GraphJet& jet, const OperatorSpec& spec,
                            const PsiModel& psi);

/// Tabulates psi(x) := G applied to the exact jets over the grid lattice.
/// Throws ConfigError listing offending nodes if the exact field is not
/// admissible at some interior node.
PsiModel manufactured_rhs(const ExactField& exact, const OperatorSpec& spec,
                          const Grid& grid);

}  // namespace hq
