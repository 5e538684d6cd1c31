#include "dbc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dbc {

namespace {

double edge_length(const Point2& a, const Point2& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

}  // namespace

Triangulation::Triangulation(std::vector<Point2> vertices,
                             std::vector<std::array<int, 3>> triangles,
                             std::vector<bool> boundary_flags, double nominal_width)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_(std::move(boundary_flags)),
      nominal_width_(nominal_width) {
  if (boundary_.size() != vertices_.size())
    throw std::invalid_argument("Triangulation: boundary flag count differs from vertex count");

  interior_index_.assign(vertices_.size(), -1);
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (!boundary_[v]) {
      interior_index_[v] = static_cast<int>(interior_nodes_.size());
      interior_nodes_.push_back(static_cast<int>(v));
    }
  }

  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int v : triangles_[t]) {
      if (v < 0 || static_cast<std::size_t>(v) >= vertices_.size())
        throw std::invalid_argument("Triangulation: vertex index out of range in triangle " +
                                    std::to_string(t));
    }
    if (!(signed_area(t) > 0.0))
      throw std::invalid_argument("Triangulation: triangle " + std::to_string(t) +
                                  " is degenerate or clockwise");
    const auto& tri = triangles_[t];
    const Point2& a = vertices_[tri[0]];
    const Point2& b = vertices_[tri[1]];
    const Point2& c = vertices_[tri[2]];
    diameter_ = std::max({diameter_, edge_length(a, b), edge_length(b, c), edge_length(c, a)});
  }
}

double Triangulation::signed_area(std::size_t t) const {
  const auto& tri = triangles_[t];
  const Point2& a = vertices_[tri[0]];
  const Point2& b = vertices_[tri[1]];
  const Point2& c = vertices_[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

std::array<Point2, 3> Triangulation::barycentric_gradients(std::size_t t) const {
  const auto& tri = triangles_[t];
  const Point2& a = vertices_[tri[0]];
  const Point2& b = vertices_[tri[1]];
  const Point2& c = vertices_[tri[2]];
  const double det = 2.0 * signed_area(t);
  return {Point2{(b.y - c.y) / det, (c.x - b.x) / det}, Point2{(c.y - a.y) / det, (a.x - c.x) / det},
          Point2{(a.y - b.y) / det, (b.x - a.x) / det}};
}

std::pair<std::size_t, std::array<double, 3>> Triangulation::locate(double x, double y) const {
  constexpr double tol = 1e-12;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    const Point2& a = vertices_[tri[0]];
    const Point2& b = vertices_[tri[1]];
    const Point2& c = vertices_[tri[2]];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double l1 = ((x - a.x) * (c.y - a.y) - (c.x - a.x) * (y - a.y)) / det;
    const double l2 = ((b.x - a.x) * (y - a.y) - (x - a.x) * (b.y - a.y)) / det;
    const double l0 = 1.0 - l1 - l2;
    if (l0 >= -tol && l1 >= -tol && l2 >= -tol) return {t, {l0, l1, l2}};
  }
  std::ostringstream msg;
  msg << "point (" << x << ", " << y << ") lies outside the triangulation";
  throw std::out_of_range(msg.str());
}

TimePartition::TimePartition(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw std::invalid_argument("TimePartition: need at least one step");
  if (points_.front() != 0.0) throw std::invalid_argument("TimePartition: t_0 must be 0");
  for (std::size_t m = 1; m < points_.size(); ++m) {
    const double k = points_[m] - points_[m - 1];
    if (!(k > 0.0)) throw std::invalid_argument("TimePartition: time points must increase strictly");
    max_step_ = std::max(max_step_, k);
  }
}

int TimePartition::slab_of(double t) const {
  if (t < 0.0 || t > points_.back())
    throw std::out_of_range("TimePartition: time outside [0, T]");
  // first m with t <= t_m
  auto it = std::lower_bound(points_.begin() + 1, points_.end(), t);
  return static_cast<int>(it - points_.begin());
}

SpaceTimeMesh::SpaceTimeMesh(Triangulation tri, TimePartition time)
    : tri_(std::move(tri)), time_(std::move(time)) {}

int SpaceTimeMesh::subdivisions() const {
  return static_cast<int>(std::lround(1.0 / tri_.nominal_width()));
}

double SpaceTimeMesh::sigma() const { return std::sqrt(h() * h() + k() * k()); }

bool SpaceTimeMesh::aspect_warning() const {
  const double ratio = k() / h();
  return ratio < 0.25 || ratio > 4.0;
}

Triangulation unit_square_mesh(int n) {
  if (n < 1) throw std::invalid_argument("unit_square_mesh: n must be >= 1");
  const int np = n + 1;
  std::vector<Point2> vertices;
  std::vector<bool> boundary;
  vertices.reserve(static_cast<std::size_t>(np) * np);
  boundary.reserve(static_cast<std::size_t>(np) * np);
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < np; ++i) {
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
      boundary.push_back(i == 0 || j == 0 || i == n || j == n);
    }
  }
  auto vid = [np](int i, int j) { return j * np + i; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }
  return Triangulation(std::move(vertices), std::move(triangles), std::move(boundary), 1.0 / n);
}

TimePartition uniform_time_partition(int steps, double final_time) {
  if (steps < 1) throw std::invalid_argument("uniform_time_partition: M must be >= 1");
  if (!(final_time > 0.0)) throw std::invalid_argument("uniform_time_partition: T must be > 0");
  std::vector<double> t(static_cast<std::size_t>(steps) + 1);
  for (int m = 0; m <= steps; ++m) t[m] = final_time * m / steps;
  t.back() = final_time;
  return TimePartition(std::move(t));
}

MeshPtr make_space_time_mesh(int n, int steps, double final_time) {
  return std::make_shared<const SpaceTimeMesh>(unit_square_mesh(n),
                                               uniform_time_partition(steps, final_time));
}

MeshPtr refine(const SpaceTimeMesh& mesh, int spatial_factor, int temporal_factor) {
  if (spatial_factor < 1 || temporal_factor < 1)
    throw std::invalid_argument("refine: factors must be >= 1");
  return make_space_time_mesh(mesh.subdivisions() * spatial_factor,
                              mesh.steps() * temporal_factor, mesh.time().final_time());
}

void write_mesh(std::ostream& os, const Triangulation& tri) {
  os.precision(17);
  for (std::size_t v = 0; v < tri.num_vertices(); ++v) {
    const auto& p = tri.vertices()[v];
    os << p.x << ' ' << p.y << ' ' << (tri.boundary_flags()[v] ? 1 : 0) << '\n';
  }
  for (const auto& t : tri.triangles()) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace dbc
