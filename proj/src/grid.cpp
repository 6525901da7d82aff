#include "hq/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace hq {

namespace {

constexpr double kMinArm = 1e-6;  // floor on cut-arm fractions

struct Arm {
  double len;  // physical arm length
  int id;      // interior unknown at the far end, or -1 for a Dirichlet zero
};

}  // namespace

std::array<int, 3> Grid::multi_index(int lin) const {
  std::array<int, 3> mi{0, 0, 0};
  for (int a = 0; a < dom.n; ++a) {
    mi[static_cast<size_t>(a)] = lin % m;
    lin /= m;
  }
  return mi;
}

int Grid::linear_index(const std::array<int, 3>& mi) const {
  int lin = 0;
  for (int a = dom.n - 1; a >= 0; --a) lin = lin * m + mi[static_cast<size_t>(a)];
  return lin;
}

Vec Grid::coord(int lin) const {
  const auto mi = multi_index(lin);
  Vec x(dom.n);
  for (int a = 0; a < dom.n; ++a) x[a] = axis_coord(mi[static_cast<size_t>(a)]);
  return x;
}

double Grid::boundary_distance(const Vec& x) const {
  if (dom.shape == Shape::disc) return dom.size - x.norm();
  return dom.size - x.cwiseAbs().maxCoeff();
}

namespace {

// First intersection of the ray x + t*v (unit v, t > 0) with |y| = R.
double ray_to_circle(const Vec& x, const Vec& v, double R) {
  const double b = x.dot(v);
  const double c = x.squaredNorm() - R * R;
  const double disc = b * b - c;
  return -b + std::sqrt(std::max(disc, 0.0));
}

// Unequal-arm 3-point first/second derivative weights on (-a, 0, +b).
struct ThreePoint {
  double w_minus, w_center, w_plus;
};

ThreePoint first_derivative(double a, double b) {
  return {-b / (a * (a + b)), (b - a) / (a * b), a / (b * (a + b))};
}

ThreePoint second_derivative(double a, double b) {
  return {2.0 / (a * (a + b)), -2.0 / (a * b), 2.0 / (b * (a + b))};
}

void push(Grid::ComponentStencil& s, int id, double w) {
  if (id >= 0 && w != 0.0) s.push_back({id, w});
}

}  // namespace

Grid build_grid(const DomainSpec& dom, int m) {
  if (dom.n < 2 || dom.n > 3) {
    throw ConfigError("build_grid: spatial dimension must be 2 or 3");
  }
  if (dom.size <= 0.0) throw ConfigError("build_grid: size must be positive");
  if (m < 5 || m % 2 == 0) {
    throw ConfigError("build_grid: nodes per axis must be odd and >= 5");
  }

  Grid g;
  g.dom = dom;
  g.m = m;
  g.center_ = (m - 1) / 2;
  g.h = 2.0 * dom.size / (m - 1);
  g.num_lattice_ = 1;
  for (int a = 0; a < dom.n; ++a) g.num_lattice_ *= m;

  g.cls_.assign(static_cast<size_t>(g.num_lattice_), Grid::NodeClass::exterior);
  g.id_.assign(static_cast<size_t>(g.num_lattice_), -1);

  const double R = dom.size;
  for (int lin = 0; lin < g.num_lattice_; ++lin) {
    const auto mi = g.multi_index(lin);
    if (dom.shape == Shape::square) {
      bool on_face = false;
      for (int a = 0; a < dom.n; ++a) {
        const int i = mi[static_cast<size_t>(a)];
        if (i == 0 || i == m - 1) on_face = true;
      }
      g.cls_[static_cast<size_t>(lin)] =
          on_face ? Grid::NodeClass::boundary : Grid::NodeClass::interior;
    } else {
      const double r2 = g.coord(lin).squaredNorm();
      if (r2 < R * R) {
        g.cls_[static_cast<size_t>(lin)] = Grid::NodeClass::interior;
      } else if (r2 == R * R) {
        g.cls_[static_cast<size_t>(lin)] = Grid::NodeClass::boundary;
      }
    }
  }
  for (int lin = 0; lin < g.num_lattice_; ++lin) {
    if (g.cls_[static_cast<size_t>(lin)] == Grid::NodeClass::interior) {
      g.id_[static_cast<size_t>(lin)] = static_cast<int>(g.interior_.size());
      g.interior_.push_back(lin);
    }
  }

  // Difference stencils per interior node.
  const int n = dom.n;
  const int npairs = n * (n + 1) / 2;
  g.stencils_.resize(g.interior_.size());

  auto neighbor = [&](const std::array<int, 3>& mi, int a, int da, int b,
                      int db) -> int {
    std::array<int, 3> mj = mi;
    mj[static_cast<size_t>(a)] += da;
    if (b >= 0) mj[static_cast<size_t>(b)] += db;
    for (int c = 0; c < n; ++c) {
      if (mj[static_cast<size_t>(c)] < 0 || mj[static_cast<size_t>(c)] >= m) return -1;
    }
    return g.linear_index(mj);
  };

  auto arm_along = [&](const Vec& x, const Vec& dir_unit, double step,
                       int nb_lin) -> Arm {
    if (nb_lin >= 0 &&
        g.cls_[static_cast<size_t>(nb_lin)] != Grid::NodeClass::exterior) {
      return {step, g.id_[static_cast<size_t>(nb_lin)]};  // -1 if boundary node
    }
    // cut to the circle (square grids never get here: lattice covers them)
    double t = ray_to_circle(x, dir_unit, R);
    t = std::min(std::max(t, kMinArm * step), step);
    return {t, -1};
  };

  for (size_t id = 0; id < g.interior_.size(); ++id) {
    const int lin = g.interior_[id];
    const auto mi = g.multi_index(lin);
    const Vec x = g.coord(lin);
    Grid::NodeStencil& st = g.stencils_[id];
    st.du.resize(static_cast<size_t>(n));
    st.d2u.resize(static_cast<size_t>(npairs));

    std::vector<Arm> plus(static_cast<size_t>(n)), minus(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) {
      Vec e = Vec::Zero(n);
      e[a] = 1.0;
      plus[static_cast<size_t>(a)] = arm_along(x, e, g.h, neighbor(mi, a, +1, -1, 0));
      minus[static_cast<size_t>(a)] = arm_along(x, -e, g.h, neighbor(mi, a, -1, -1, 0));
    }

    const int self = static_cast<int>(id);
    for (int a = 0; a < n; ++a) {
      const Arm& ap = plus[static_cast<size_t>(a)];
      const Arm& am = minus[static_cast<size_t>(a)];
      const ThreePoint d1 = first_derivative(am.len, ap.len);
      const ThreePoint d2 = second_derivative(am.len, ap.len);
      push(st.du[static_cast<size_t>(a)], am.id, d1.w_minus);
      push(st.du[static_cast<size_t>(a)], self, d1.w_center);
      push(st.du[static_cast<size_t>(a)], ap.id, d1.w_plus);
      auto& saa = st.d2u[static_cast<size_t>(a * (a + 1) / 2 + a)];
      push(saa, am.id, d2.w_minus);
      push(saa, self, d2.w_center);
      push(saa, ap.id, d2.w_plus);
    }

    // mixed derivatives
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < b; ++a) {
        auto& sab = st.d2u[static_cast<size_t>(b * (b + 1) / 2 + a)];
        const int pp = neighbor(mi, a, +1, b, +1);
        const int mm = neighbor(mi, a, -1, b, -1);
        const int pm = neighbor(mi, a, +1, b, -1);
        const int mp = neighbor(mi, a, -1, b, +1);
        auto usable = [&](int nb) {
          return nb >= 0 &&
                 g.cls_[static_cast<size_t>(nb)] != Grid::NodeClass::exterior;
        };
        if (usable(pp) && usable(mm) && usable(pm) && usable(mp)) {
          const double w = 1.0 / (4.0 * g.h * g.h);
          push(sab, g.id_[static_cast<size_t>(pp)], w);
          push(sab, g.id_[static_cast<size_t>(mm)], w);
          push(sab, g.id_[static_cast<size_t>(pm)], -w);
          push(sab, g.id_[static_cast<size_t>(mp)], -w);
        } else {
          // d_ab = (d2/dv1^2 - d2/dv2^2)/2 along the two diagonals,
          // with arms cut at the circle
          const double H = std::sqrt(2.0) * g.h;
          Vec v1 = Vec::Zero(n), v2 = Vec::Zero(n);
          v1[a] = v1[b] = 1.0 / std::sqrt(2.0);
          v2[a] = 1.0 / std::sqrt(2.0);
          v2[b] = -1.0 / std::sqrt(2.0);
          const Arm p1 = arm_along(x, v1, H, pp);
          const Arm m1 = arm_along(x, -v1, H, mm);
          const Arm p2 = arm_along(x, v2, H, pm);
          const Arm m2 = arm_along(x, -v2, H, mp);
          const ThreePoint t1 = second_derivative(m1.len, p1.len);
          const ThreePoint t2 = second_derivative(m2.len, p2.len);
          push(sab, m1.id, 0.5 * t1.w_minus);
          push(sab, self, 0.5 * t1.w_center);
          push(sab, p1.id, 0.5 * t1.w_plus);
          push(sab, m2.id, -0.5 * t2.w_minus);
          push(sab, self, -0.5 * t2.w_center);
          push(sab, p2.id, -0.5 * t2.w_plus);
        }
      }
    }
  }
  return g;
}

Field zero_field(std::shared_ptr<const Grid> grid) {
  Field f;
  f.values = Vec::Zero(grid->num_lattice());
  f.grid = std::move(grid);
  return f;
}

Field sample_field(std::shared_ptr<const Grid> grid,
                   const std::function<double(const Vec&)>& fn) {
  Field f = zero_field(std::move(grid));
  for (int id = 0; id < f.grid->num_interior(); ++id) {
    const int lin = f.grid->interior_node(id);
    f.values[lin] = fn(f.grid->coord(lin));
  }
  return f;
}

Vec pack_interior(const Field& f) {
  Vec u(f.grid->num_interior());
  for (int id = 0; id < f.grid->num_interior(); ++id) {
    u[id] = f.values[f.grid->interior_node(id)];
  }
  return u;
}

void unpack_interior(const Vec& u, Field& f) {
  for (int id = 0; id < f.grid->num_interior(); ++id) {
    f.values[f.grid->interior_node(id)] = u[id];
  }
}

GraphJet jet_at(const Field& f, int lin) {
  const Grid& g = *f.grid;
  const int id = g.unknown_id(lin);
  if (id < 0) throw std::domain_error("jet_at: not an interior node");
  const Grid::NodeStencil& st = g.stencil(id);
  const int n = g.dim();

  GraphJet jet;
  jet.x = g.coord(lin);
  jet.u = f.values[lin];
  jet.du = Vec::Zero(n);
  jet.d2u = Mat::Zero(n, n);
  auto apply = [&](const Grid::ComponentStencil& s) {
    double v = 0.0;
    for (const auto& e : s) v += e.w * f.values[g.interior_node(e.id)];
    return v;
  };
  for (int a = 0; a < n; ++a) jet.du[a] = apply(st.du[static_cast<size_t>(a)]);
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a <= b; ++a) {
      const double v = apply(st.d2u[static_cast<size_t>(b * (b + 1) / 2 + a)]);
      jet.d2u(a, b) = v;
      jet.d2u(b, a) = v;
    }
  }
  return jet;
}

namespace {

FieldNorms norms_over(const Field& f,
                      const std::function<bool(const Vec&)>& keep) {
  FieldNorms out;
  for (int id = 0; id < f.grid->num_interior(); ++id) {
    const int lin = f.grid->interior_node(id);
    if (!keep(f.grid->coord(lin))) continue;
    const GraphJet jet = jet_at(f, lin);
    out.sup_u = std::max(out.sup_u, std::abs(jet.u));
    out.sup_du = std::max(out.sup_du, jet.du.norm());
    out.sup_d2u = std::max(out.sup_d2u, jet.d2u.norm());
  }
  return out;
}

}  // namespace

FieldNorms discrete_norms(const Field& f) {
  return norms_over(f, [](const Vec&) { return true; });
}

FieldNorms discrete_norms_band(const Field& f, bool near_boundary, double band) {
  const Grid& g = *f.grid;
  return norms_over(f, [&](const Vec& x) {
    const bool near = g.boundary_distance(x) <= band;
    return near == near_boundary;
  });
}

void dump_field_csv(const Field& f, int k, int l, std::ostream& os) {
  const Grid& g = *f.grid;
  const char* shape = (g.dom.shape == Shape::disc) ? "disc" : "square";
  os << "# " << g.dim() << " " << k << " " << l << " " << shape << " "
     << g.dom.size << " " << g.m << " " << g.h << "\n";
  for (int lin = 0; lin < g.num_lattice(); ++lin) {
    if (g.node_class(lin) == Grid::NodeClass::exterior) continue;
    const auto mi = g.multi_index(lin);
    const Vec x = g.coord(lin);
    for (int a = 0; a < g.dim(); ++a) os << mi[static_cast<size_t>(a)] << ",";
    for (int a = 0; a < g.dim(); ++a) os << x[a] << ",";
    os << f.values[lin] << "\n";
  }
}

}  // namespace hq
