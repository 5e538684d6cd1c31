#pragma once

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "dbc/mesh.hpp"
#include "dbc/quadrature.hpp"
#include "dbc/spaces.hpp"

namespace dbc {

using SparseMatrix = Eigen::SparseMatrix<double>;

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// P1 stiffness on the triangle (a, b, c). Throws AssemblyError when the
/// triangle has non-positive area.
Eigen::Matrix3d element_stiffness(const Point2& a, const Point2& b, const Point2& c);
/// P1 mass on a triangle of the given area.
Eigen::Matrix3d element_mass(double area);
/// P1 mass and stiffness on a time interval of length k.
Eigen::Matrix2d time_mass(double k);
Eigen::Matrix2d time_stiffness(double k);

/// Mass M_ij = (phi_i, phi_j) and stiffness S_ij = (grad phi_i, grad phi_j)
/// over all vertices.
struct SpatialMatrices {
  SparseMatrix mass;
  SparseMatrix stiffness;
};

SpatialMatrices assemble_mass_stiffness(const Triangulation& tri);

/// Space-time H1 seminorm (d_t q, d_t p)_I + (grad q, grad p)_I on the
/// control DOFs, without the regularization weight. Time levels 0 and M are
/// eliminated, which leaves the matrix positive definite.
SparseMatrix assemble_control_seminorm(const SpaceTimeMesh& mesh, const SpatialMatrices& spatial);

/// Every assembled operator needed by the state, adjoint and reduced
/// problem on one mesh. Immutable after construction.
class Discretization {
 public:
  explicit Discretization(MeshPtr mesh);

  const MeshPtr& mesh_ptr() const { return mesh_; }
  const SpaceTimeMesh& mesh() const { return *mesh_; }
  const Triangulation& space() const { return mesh_->space(); }

  int num_nodes() const { return static_cast<int>(space().num_vertices()); }
  int num_interior() const { return static_cast<int>(space().num_interior()); }
  int steps() const { return mesh_->steps(); }
  double step(int m) const { return mesh_->time().step(m); }

  const SparseMatrix& mass() const { return spatial_.mass; }
  const SparseMatrix& stiffness() const { return spatial_.stiffness; }
  /// Interior rows, all columns.
  const SparseMatrix& mass_rows() const { return mass_if_; }
  const SparseMatrix& stiffness_rows() const { return stiffness_if_; }
  /// Interior rows and columns.
  const SparseMatrix& mass_interior() const { return mass_ii_; }
  const SparseMatrix& stiffness_interior() const { return stiffness_ii_; }
  const SparseMatrix& control_seminorm() const { return seminorm_; }

  /// Zero-extension of an interior vector to all vertices.
  Vector extend(const Vector& interior) const;
  /// Interior entries of a vertex vector.
  Vector restrict(const Vector& full) const;

 private:
  MeshPtr mesh_;
  SpatialMatrices spatial_;
  SparseMatrix mass_if_, stiffness_if_;
  SparseMatrix mass_ii_, stiffness_ii_;
  SparseMatrix seminorm_;
};

using DiscretizationPtr = std::shared_ptr<const Discretization>;

/// B(q, v) for v = phi_i on slab m, i interior:
///   M (q_m - q_{m-1}) + (k_m / 2) S (q_m + q_{m-1}).
/// The jump terms vanish because q is continuous with q(0) = 0.
Vector assemble_coupling(const Discretization& disc, const ControlField& q, int m);

/// (f, phi_i)_{I_m} for interior i.
Vector assemble_source(const Discretization& disc, const SpaceTimeFunction& f, int m,
                       const PrismRule& rule = default_prism_rule());

/// Loads of g against the two time hats of slab m on all vertices:
/// left = (g, phi_j (t_m - t)/k_m)_{I_m}, right = (g, phi_j (t - t_{m-1})/k_m)_{I_m}.
struct HatLoads {
  Vector left;
  Vector right;
};
HatLoads assemble_hat_loads(const Discretization& disc, const SpaceTimeFunction& g, int m,
                            const PrismRule& rule = default_prism_rule());

/// (w_m + q(t) - u_d, phi_i)_{I_m} for interior i, by quadrature.
Vector assemble_tracking(const Discretization& disc, const SpaceTimeFunction& u_d,
                         const StateField& w, const ControlField& q, int m,
                         const PrismRule& rule = default_prism_rule());

/// (u0, phi_i) for interior i.
Vector assemble_initial_load(const Discretization& disc, const std::function<double(double, double)>& u0,
                             const TriangleRule& rule = triangle_degree4());

/// Spatial L2 projection onto V_h: solves M_int c = (u0, phi_i).
Vector l2_project_initial(const Discretization& disc, const std::function<double(double, double)>& u0,
                          const TriangleRule& rule = triangle_degree4());

/// Integral of g over Omega x (0, T) by the prism rule.
double integrate(const Discretization& disc, const SpaceTimeFunction& g,
                 const PrismRule& rule = default_prism_rule());

/// Matrix Market export, for debugging.
void write_matrix_market(std::ostream& os, const SparseMatrix& a);

}  // namespace dbc
