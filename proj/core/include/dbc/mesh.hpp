#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

namespace dbc {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Conforming P1 triangulation of a polygonal domain.
///
/// Triangles are stored counter-clockwise. Interior vertices (those not on
/// the boundary) get a dense secondary numbering used by the state space,
/// where the zero trace is imposed by leaving boundary vertices out.
class Triangulation {
 public:
  Triangulation(std::vector<Point2> vertices,
                std::vector<std::array<int, 3>> triangles,
                std::vector<bool> boundary_flags, double nominal_width);

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<bool>& boundary_flags() const { return boundary_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_interior() const { return interior_nodes_.size(); }

  bool is_boundary(int v) const { return boundary_[static_cast<std::size_t>(v)]; }

  /// Interior index of vertex v, or -1 for boundary vertices.
  int interior_index(int v) const { return interior_index_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& interior_nodes() const { return interior_nodes_; }

  /// Maximum triangle diameter (longest edge).
  double diameter() const { return diameter_; }

  /// Axis-aligned cell width of the generating grid. This is the value
  /// reported as h in convergence tables.
  double nominal_width() const { return nominal_width_; }

  double signed_area(std::size_t t) const;

  /// Constant gradients of the three barycentric coordinates on triangle t.
  std::array<Point2, 3> barycentric_gradients(std::size_t t) const;

  /// Triangle containing (x, y) and barycentric coordinates of the point.
  /// Throws std::out_of_range if the point lies outside the closed domain.
  std::pair<std::size_t, std::array<double, 3>> locate(double x, double y) const;

 private:
  std::vector<Point2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<bool> boundary_;
  std::vector<int> interior_index_;
  std::vector<int> interior_nodes_;
  double diameter_ = 0.0;
  double nominal_width_ = 0.0;
};

class TimePartition {
 public:
  explicit TimePartition(std::vector<double> points);

  const std::vector<double>& points() const { return points_; }
  /// Number of slabs M.
  int steps() const { return static_cast<int>(points_.size()) - 1; }
  double final_time() const { return points_.back(); }
  /// Length of slab I_m = (t_{m-1}, t_m], m = 1..M.
  double step(int m) const { return points_[m] - points_[m - 1]; }
  double max_step() const { return max_step_; }

  /// Slab m with t in (t_{m-1}, t_m]; t = 0 is assigned to the first slab.
  int slab_of(double t) const;

 private:
  std::vector<double> points_;
  double max_step_ = 0.0;
};

/// Product mesh of prisms K x I_m.
class SpaceTimeMesh {
 public:
  SpaceTimeMesh(Triangulation tri, TimePartition time);

  const Triangulation& space() const { return tri_; }
  const TimePartition& time() const { return time_; }

  int subdivisions() const;
  int steps() const { return time_.steps(); }

  double h() const { return tri_.nominal_width(); }
  double k() const { return time_.max_step(); }
  /// Control discretization parameter sqrt(h^2 + k^2).
  double sigma() const;

  std::size_t num_prisms() const { return tri_.num_triangles() * static_cast<std::size_t>(steps()); }

  /// True when k/h lies outside [0.25, 4], where the prism family stops
  /// looking quasi-uniform.
  bool aspect_warning() const;

 private:
  Triangulation tri_;
  TimePartition time_;
};

using MeshPtr = std::shared_ptr<const SpaceTimeMesh>;

/// Structured mesh of (0,1)^2 on an n x n grid, each cell split along the
/// diagonal from its lower-left to its upper-right corner. Vertices are
/// numbered lexicographically by (y, x).
Triangulation unit_square_mesh(int n);

/// t_m = m T / M.
TimePartition uniform_time_partition(int steps, double final_time);

/// Unit square x (0, T) with n spatial subdivisions and M uniform steps.
MeshPtr make_space_time_mesh(int n, int steps, double final_time = 1.0);

/// Uniform refinement of a mesh produced by make_space_time_mesh.
MeshPtr refine(const SpaceTimeMesh& mesh, int spatial_factor, int temporal_factor);

/// Plain-text dump: "x y flag" per vertex, then "i j k" per triangle.
void write_mesh(std::ostream& os, const Triangulation& tri);

}  // namespace dbc
