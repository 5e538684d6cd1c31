#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "dbc/mesh.hpp"

namespace dbc {

using Vector = Eigen::VectorXd;

/// Scalar function of (x, y, t).
using SpaceTimeFunction = std::function<double(double, double, double)>;

/// Piecewise constant in time, P1 in space with zero trace: one vector of
/// interior nodal values per slab I_m = (t_{m-1}, t_m].
template <class Tag>
class SlabField {
 public:
  SlabField() = default;
  explicit SlabField(MeshPtr mesh)
      : mesh_(std::move(mesh)),
        slabs_(static_cast<std::size_t>(mesh_->steps()),
               Vector::Zero(static_cast<Eigen::Index>(mesh_->space().num_interior()))) {}

  const MeshPtr& mesh() const { return mesh_; }
  int steps() const { return static_cast<int>(slabs_.size()); }

  /// Coefficients on slab m, 1 <= m <= M.
  Vector& slab(int m) { return slabs_[static_cast<std::size_t>(m - 1)]; }
  const Vector& slab(int m) const { return slabs_[static_cast<std::size_t>(m - 1)]; }

  /// Value at vertex v on slab m; zero on the boundary.
  double nodal(int m, int v) const {
    const int i = mesh_->space().interior_index(v);
    return i < 0 ? 0.0 : slab(m)[i];
  }

 private:
  MeshPtr mesh_;
  std::vector<Vector> slabs_;
};

struct StateTag {};
struct AdjointTag {};
using StateField = SlabField<StateTag>;
using AdjointField = SlabField<AdjointTag>;

/// Continuous P1 x P1 field on prisms, vanishing at t = 0 and t = T.
/// Coefficients are stored for the interior time levels t_1..t_{M-1} and
/// every spatial vertex, level-major: index (l - 1) * N + v.
class ControlField {
 public:
  ControlField() = default;
  explicit ControlField(MeshPtr mesh);
  ControlField(MeshPtr mesh, Vector values);

  const MeshPtr& mesh() const { return mesh_; }
  int num_nodes() const { return nodes_; }
  int num_levels() const { return levels_; }

  Vector& values() { return values_; }
  const Vector& values() const { return values_; }

  static Eigen::Index dof(int level, int vertex, int num_nodes) {
    return static_cast<Eigen::Index>(level - 1) * num_nodes + vertex;
  }

  /// Nodal vector at time level l, 0 <= l <= M; levels 0 and M are zero.
  Vector level(int l) const;
  double at(int l, int v) const;

 private:
  MeshPtr mesh_;
  int nodes_ = 0;
  int levels_ = 0;
  Vector values_;
};

/// Pointwise bounds q_a <= q <= q_b on control DOFs whose vertex lies on
/// the contact part of the boundary. Boundary DOFs off the contact part are
/// pinned to zero.
struct BoundSet {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<Eigen::Index> constrained;
  std::vector<Eigen::Index> pinned;
};

/// Which part of the lateral boundary carries the box constraints.
enum class ContactBoundary {
  all,     // whole boundary of the square
  bottom,  // open edge (0,1) x {0}; the rest is homogeneous Dirichlet
};

/// Requires q_a <= 0 <= q_b so the zero control is admissible.
BoundSet make_bound_set(const SpaceTimeMesh& mesh, double lower, double upper,
                        ContactBoundary contact = ContactBoundary::all);
/// Contact vertices chosen by predicate; other boundary vertices are pinned.
BoundSet make_bound_set(const SpaceTimeMesh& mesh, double lower, double upper,
                        const std::function<bool(const Point2&)>& on_contact);

/// Nodal interpolation at (vertex, interior time level).
ControlField interpolate_control(const MeshPtr& mesh, const SpaceTimeFunction& g);

/// P1 value inside the containing triangle on the slab holding t.
/// Throws std::out_of_range outside the closed space-time domain.
double eval_state(const StateField& u, double x, double y, double t);
double eval_adjoint(const AdjointField& phi, double x, double y, double t);
double eval_control(const ControlField& q, double x, double y, double t);

ControlField project_onto_bounds(const ControlField& q, const BoundSet& bounds);

}  // namespace dbc
