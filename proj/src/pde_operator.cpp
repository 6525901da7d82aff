#include "hq/pde_operator.hpp"

#include <cmath>
#include <sstream>

namespace hq {

namespace {
constexpr double kNuStep = 1e-6;  // tangent-space step for psi_nu
}

PsiModel PsiModel::constant(double c, int power) {
  if (c < 0.0) throw ConfigError("psi constant: value must be >= 0");
  PsiModel p;
  p.kind_ = Kind::constant;
  p.params_ = {c};
  p.power_ = power;
  return p;
}

PsiModel PsiModel::radial_bump(double amp, double r0, int power) {
  if (amp < 0.0 || r0 < 0.0) {
    throw ConfigError("psi radial_bump: parameters must be >= 0");
  }
  PsiModel p;
  p.kind_ = Kind::radial_bump;
  p.params_ = {amp, r0};
  p.power_ = power;
  return p;
}

PsiModel PsiModel::normal_dependent(double p0, double p1, double p2,
                                    int power) {
  if (p0 < 0.0 || p1 < 0.0 || p2 < 0.0) {
    throw ConfigError("psi normal_dependent: coefficients must be >= 0");
  }
  PsiModel p;
  p.kind_ = Kind::normal_dependent;
  p.params_ = {p0, p1, p2};
  p.power_ = power;
  return p;
}

PsiModel PsiModel::from_table(const Grid& grid, std::vector<double> table,
                              int power) {
  if (static_cast<int>(table.size()) != grid.num_lattice()) {
    throw ConfigError("psi table: size must match the lattice");
  }
  PsiModel p;
  p.kind_ = Kind::manufactured;
  p.power_ = power;
  p.table_m = grid.m;
  p.table_dim = grid.dim();
  p.table_size = grid.dom.size;
  p.table_ = std::move(table);
  return p;
}

PsiModel PsiModel::with_epsilon(double eps) const {
  if (eps < 0.0) throw ConfigError("psi: regularization level must be >= 0");
  PsiModel copy = *this;
  copy.eps_ = eps;
  return copy;
}

PsiModel regularize(const PsiModel& psi, double eps) {
  return psi.with_epsilon(eps);
}

namespace {

// Catmull-Rom weights for fractional position t in [0,1).
void catmull_rom(double t, double w[4]) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
  w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
  w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
  w[3] = 0.5 * (t3 - t2);
}

}  // namespace

double PsiModel::interpolate(const Vec& x) const {
  const int m = table_m;
  const int n = table_dim;
  const double h = 2.0 * table_size / (m - 1);
  const int center = (m - 1) / 2;

  int base[3] = {0, 0, 0};
  double w[3][4];
  for (int a = 0; a < n; ++a) {
    double s = x[a] / h + center;  // lattice units
    s = std::min(std::max(s, 0.0), static_cast<double>(m - 1));
    int i0 = static_cast<int>(std::floor(s));
    if (i0 > m - 2) i0 = m - 2;
    catmull_rom(s - i0, w[a]);
    base[a] = i0 - 1;
  }
  auto clamp_idx = [m](int i) { return std::min(std::max(i, 0), m - 1); };

  double acc = 0.0;
  const int jmax = (n >= 2) ? 4 : 1;
  const int kmax = (n >= 3) ? 4 : 1;
  for (int kk = 0; kk < kmax; ++kk) {
    for (int jj = 0; jj < jmax; ++jj) {
      for (int ii = 0; ii < 4; ++ii) {
        int lin = clamp_idx(base[0] + ii);
        double ww = w[0][ii];
        if (n >= 2) {
          lin += m * clamp_idx(base[1] + jj);
          ww *= w[1][jj];
        }
        if (n >= 3) {
          lin += m * m * clamp_idx(base[2] + kk);
          ww *= w[2][kk];
        }
        acc += ww * table_[static_cast<size_t>(lin)];
      }
    }
  }
  return acc;
}

double PsiModel::base(const Vec& x, double z, const Vec& nu) const {
  switch (kind_) {
    case Kind::constant:
      return params_[0];
    case Kind::radial_bump: {
      const double s = std::max(0.0, x.norm() - params_[1]);
      const double root = params_[0] * s * s;
      return std::pow(root, power_);
    }
    case Kind::normal_dependent: {
      const double nu_last = (nu.size() > 0) ? nu[nu.size() - 1] : 1.0;
      return params_[0] + params_[1] * (1.0 + nu_last) + params_[2] * std::exp(z);
    }
    case Kind::manufactured:
      return std::max(0.0, interpolate(x));
  }
  return 0.0;
}

double PsiModel::value(const Vec& x, double z, const Vec& nu) const {
  const double b = base(x, z, nu);
  if (eps_ == 0.0) return b;
  const double root = std::pow(b, 1.0 / power_);
  return std::pow(root + eps_, power_);
}

double PsiModel::chain_factor(const Vec& x, double z, const Vec& nu) const {
  // d psi_eps / d psi = ((root+eps)/root)^{q-1}
  if (eps_ == 0.0 || power_ == 1) return 1.0;
  const double b = base(x, z, nu);
  if (b <= 0.0) return 0.0;  // base derivative vanishes at a degenerate minimum
  const double root = std::pow(b, 1.0 / power_);
  return std::pow((root + eps_) / root, power_ - 1);
}

double PsiModel::dz(const Vec& x, double z, const Vec& nu) const {
  if (kind_ != Kind::normal_dependent) return 0.0;
  return chain_factor(x, z, nu) * params_[2] * std::exp(z);
}

Vec PsiModel::dx(const Vec& x, double z, const Vec& nu) const {
  const int n = static_cast<int>(x.size());
  switch (kind_) {
    case Kind::constant:
    case Kind::normal_dependent:
      return Vec::Zero(n);
    case Kind::radial_bump: {
      const double r = x.norm();
      const double s = std::max(0.0, r - params_[1]);
      if (s == 0.0 || r == 0.0) return Vec::Zero(n);
      // psi = (amp s^2)^q; d psi = 2 q amp^q s^{2q-1} x / r
      const double c = 2.0 * power_ * std::pow(params_[0], power_) *
                       std::pow(s, 2 * power_ - 1);
      return chain_factor(x, z, nu) * c * x / r;
    }
    case Kind::manufactured: {
      const double h = 2.0 * table_size / (table_m - 1);
      const double step = h / 16.0;
      Vec out(n);
      for (int a = 0; a < n; ++a) {
        Vec xp = x, xm = x;
        xp[a] += step;
        xm[a] -= step;
        out[a] = (std::max(0.0, interpolate(xp)) -
                  std::max(0.0, interpolate(xm))) /
                 (2.0 * step);
      }
      return chain_factor(x, z, nu) * out;
    }
  }
  return Vec::Zero(n);
}

double PsiModel::dnu_dir(const Vec& x, double z, const Vec& nu,
                         const Vec& w) const {
  if (kind_ == Kind::constant || kind_ == Kind::radial_bump ||
      kind_ == Kind::manufactured) {
    return 0.0;  // no normal dependence
  }
  const Vec np = (nu + kNuStep * w).normalized();
  const Vec nm = (nu - kNuStep * w).normalized();
  const double d = (base(x, z, np) - base(x, z, nm)) / (2.0 * kNuStep);
  return chain_factor(x, z, nu) * d;
}

std::string PsiModel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant:
      os << "constant:" << params_[0];
      break;
    case Kind::radial_bump:
      os << "radial_bump:" << params_[0] << "," << params_[1];
      break;
    case Kind::normal_dependent:
      os << "normal_dependent:" << params_[0] << "," << params_[1] << ","
         << params_[2];
      break;
    case Kind::manufactured:
      os << "manufactured[m=" << table_m << "]";
      break;
  }
  if (eps_ > 0.0) os << " eps=" << eps_;
  return os.str();
}

double g_value(const Mat& d2u, const Vec& du, const OperatorSpec& spec) {
  GraphJet jet;
  jet.x = Vec::Zero(du.size());
  jet.u = 0.0;
  jet.du = du;
  jet.d2u = d2u;
  const SurfaceData s = surface_data(jet);
  return quotient_jet(s.eta_eigs, spec.k, spec.l).value;
}

double residual(const GraphJet& jet, const OperatorSpec& spec,
                const PsiModel& psi) {
  const SurfaceData s = surface_data(jet);
  const ConeResult cone = in_cone(s.kappa, {spec.k, spec.l, ConeKind::gamma_tilde});
  if (!cone.inside) {
    throw ConeViolation("residual: jet not admissible", cone.margin);
  }
  const double G = quotient_jet(s.eta_eigs, spec.k, spec.l).value;
  return G - psi.value(jet.x, jet.u, s.nu);
}

LinearizationData linearize(const GraphJet& jet, const OperatorSpec& spec,
                            const PsiModel& psi) {
  const int n = spec.n;
  const SurfaceData s = surface_data(jet);
  const ConeResult cone = in_cone(s.kappa, {spec.k, spec.l, ConeKind::gamma_tilde});
  if (!cone.inside) {
    throw ConeViolation("linearize: jet not admissible", cone.margin);
  }

  // Eigen-aligned eta and the quotient gradient with respect to eta.
  const Vec eta = eta_map(s.kappa);
  const QuotientJet qj = quotient_jet(eta, spec.k, spec.l);
  const double fsum = qj.grad.sum();
  Vec f(n);  // dG/d kappa_i = sum_{m != i} (dF/d eta_m)
  for (int i = 0; i < n; ++i) f[i] = fsum - qj.grad[i];

  const Mat& Q = s.kappa_vectors;
  const Mat dFdA = Q * f.asDiagonal() * Q.transpose();

  LinearizationData lin;
  lin.Gij = s.gamma_up * dFdA * s.gamma_up / s.omega;

  // dG/dp_s, the closed form for the gradient chain through gamma and omega
  const double fk = f.dot(s.kappa);
  const Vec& du = jet.du;
  const Mat& A = s.shape;
  const Vec t1 = s.gamma_up * (dFdA * (A * du));
  const Vec t2 = s.gamma_up * (A * (dFdA * du));
  lin.Gs = -(fk / (s.omega * s.omega)) * du -
           (2.0 / (s.omega * (s.omega + 1.0))) * (s.omega * t1 + t2);

  lin.psi_z = psi.dz(jet.x, jet.u, s.nu);
  lin.psi_p.resize(n);
  for (int a = 0; a < n; ++a) {
    Vec w(n + 1);  // d nu / d p_a, tangent to the sphere
    w.head(n) = (du[a] / (s.omega * s.omega * s.omega)) * du;
    w[a] -= 1.0 / s.omega;
    w[n] = -du[a] / (s.omega * s.omega * s.omega);
    lin.psi_p[a] = psi.dnu_dir(jet.x, jet.u, s.nu, w);
  }
  return lin;
}

PsiModel manufactured_rhs(const ExactField& exact, const OperatorSpec& spec,
                          const Grid& grid) {
  std::vector<double> table(static_cast<size_t>(grid.num_lattice()), 0.0);
  std::ostringstream offending;
  int bad = 0;
  for (int lin = 0; lin < grid.num_lattice(); ++lin) {
    const GraphJet jet = exact.jet(grid.coord(lin));
    const SurfaceData s = surface_data(jet);
    const ConeResult cone =
        in_cone(s.kappa, {spec.k, spec.l, ConeKind::gamma_tilde});
    if (grid.node_class(lin) == Grid::NodeClass::interior && !cone.inside) {
      if (bad < 8) {
        offending << " (" << grid.coord(lin).transpose() << ")";
      }
      ++bad;
      continue;
    }
    table[static_cast<size_t>(lin)] =
        cone.inside ? quotient_jet(s.eta_eigs, spec.k, spec.l).value : 0.0;
  }
  if (bad > 0) {
    throw ConfigError("manufactured_rhs: exact field inadmissible at " +
                      std::to_string(bad) + " interior nodes:" +
                      offending.str());
  }
  return PsiModel::from_table(grid, std::move(table), spec.power());
}

}  // namespace hq
