#pragma once

#include "hq/hypersurface.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

namespace hq {

enum class Shape { square, disc };

struct DomainSpec {
  Shape shape = Shape::disc;
  double size = 1.0;  // half-width (square) or radius (disc)
  int n = 2;
};

/// Uniform lattice over [-size, size]^n with the domain cut out of it.
/// Interior nodes are the unknowns; the homogeneous Dirichlet condition is
/// carried by boundary lattice nodes (square, or lattice points exactly on
/// the circle) and by exact off-lattice circle intersections along the
/// difference arms (Shortley-Weller). Exterior nodes are never read.
class Grid {
 public:
  enum class NodeClass : uint8_t { exterior = 0, boundary = 1, interior = 2 };

  // one weighted reference to an interior unknown; Dirichlet endpoints are
  // zero-valued and simply drop out
  struct Entry {
    int id;
    double w;
  };
  using ComponentStencil = std::vector<Entry>;

  struct NodeStencil {
    std::vector<ComponentStencil> du;   // n components
    std::vector<ComponentStencil> d2u;  // packed upper triangle, a <= b
  };

  DomainSpec dom;
  int m = 0;      // nodes per axis
  double h = 0;   // spacing

  int dim() const { return dom.n; }
  int num_lattice() const { return num_lattice_; }
  int num_interior() const { return static_cast<int>(interior_.size()); }

  NodeClass node_class(int lin) const { return cls_[static_cast<size_t>(lin)]; }
  int unknown_id(int lin) const { return id_[static_cast<size_t>(lin)]; }
  int interior_node(int id) const { return interior_[static_cast<size_t>(id)]; }

  std::array<int, 3> multi_index(int lin) const;
  int linear_index(const std::array<int, 3>& mi) const;
  Vec coord(int lin) const;
  double axis_coord(int idx) const { return (idx - center_) * h; }

  const NodeStencil& stencil(int id) const { return stencils_[static_cast<size_t>(id)]; }

  /// Distance from a point to the domain boundary (nonnegative inside).
  double boundary_distance(const Vec& x) const;

  friend Grid build_grid(const DomainSpec& dom, int m);

 private:
  int num_lattice_ = 0;
  int center_ = 0;
  std::vector<NodeClass> cls_;
  std::vector<int> id_;
  std::vector<int> interior_;
  std::vector<NodeStencil> stencils_;
};

Grid build_grid(const DomainSpec& dom, int m);

/// Node values over the lattice; boundary and exterior entries are 0.
struct Field {
  std::shared_ptr<const Grid> grid;
  Vec values;
};

Field zero_field(std::shared_ptr<const Grid> grid);
Field sample_field(std::shared_ptr<const Grid> grid,
                   const std::function<double(const Vec&)>& f);

/// Interior unknowns as a compact vector and back.
Vec pack_interior(const Field& f);
void unpack_interior(const Vec& u, Field& f);

GraphJet jet_at(const Field& f, int lin);

struct FieldNorms {
  double sup_u = 0.0;
  double sup_du = 0.0;
  double sup_d2u = 0.0;  // Frobenius norm pointwise
};

FieldNorms discrete_norms(const Field& f);
/// Norms restricted to nodes with boundary distance <= band (near == true)
/// or > band (near == false).
FieldNorms discrete_norms_band(const Field& f, bool near_boundary, double band);

void dump_field_csv(const Field& f, int k, int l, std::ostream& os);

}  // namespace hq
