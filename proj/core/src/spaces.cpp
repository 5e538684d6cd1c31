#include "dbc/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dbc {

ControlField::ControlField(MeshPtr mesh)
    : mesh_(std::move(mesh)),
      nodes_(static_cast<int>(mesh_->space().num_vertices())),
      levels_(mesh_->steps() - 1),
      values_(Vector::Zero(static_cast<Eigen::Index>(nodes_) * std::max(levels_, 0))) {}

ControlField::ControlField(MeshPtr mesh, Vector values) : ControlField(std::move(mesh)) {
  if (values.size() != values_.size())
    throw std::invalid_argument("ControlField: coefficient vector has wrong size");
  values_ = std::move(values);
}

Vector ControlField::level(int l) const {
  if (l <= 0 || l >= levels_ + 1) return Vector::Zero(nodes_);
  return values_.segment(dof(l, 0, nodes_), nodes_);
}

double ControlField::at(int l, int v) const {
  if (l <= 0 || l >= levels_ + 1) return 0.0;
  return values_[dof(l, v, nodes_)];
}

BoundSet make_bound_set(const SpaceTimeMesh& mesh, double lower, double upper,
                        const std::function<bool(const Point2&)>& on_contact) {
  if (!(lower <= 0.0 && 0.0 <= upper))
    throw std::invalid_argument("make_bound_set: bounds must satisfy q_a <= 0 <= q_b");
  BoundSet b{lower, upper, {}, {}};
  const auto& tri = mesh.space();
  const int nodes = static_cast<int>(tri.num_vertices());
  for (int l = 1; l < mesh.steps(); ++l) {
    for (int v = 0; v < nodes; ++v) {
      if (!tri.is_boundary(v)) continue;
      if (on_contact(tri.vertices()[v]))
        b.constrained.push_back(ControlField::dof(l, v, nodes));
      else
        b.pinned.push_back(ControlField::dof(l, v, nodes));
    }
  }
  return b;
}

BoundSet make_bound_set(const SpaceTimeMesh& mesh, double lower, double upper, ContactBoundary contact) {
  if (contact == ContactBoundary::all) return make_bound_set(mesh, lower, upper, [](const Point2&) { return true; });
  constexpr double tol = 1e-12;
  return make_bound_set(mesh, lower, upper,
                        [](const Point2& p) { return std::abs(p.y) < tol && p.x > tol && p.x < 1.0 - tol; });
}

ControlField interpolate_control(const MeshPtr& mesh, const SpaceTimeFunction& g) {
  ControlField q(mesh);
  const auto& verts = mesh->space().vertices();
  const auto& t = mesh->time().points();
  const int nodes = q.num_nodes();
  for (int l = 1; l <= q.num_levels(); ++l)
    for (int v = 0; v < nodes; ++v)
      q.values()[ControlField::dof(l, v, nodes)] = g(verts[v].x, verts[v].y, t[l]);
  return q;
}

namespace {

template <class Field>
double eval_slab_field(const Field& u, double x, double y, double t) {
  const auto& mesh = *u.mesh();
  if (t <= 0.0 || t > mesh.time().final_time())
    throw std::out_of_range("eval: time outside (0, T]");
  const int m = mesh.time().slab_of(t);
  const auto [tri, bary] = mesh.space().locate(x, y);
  const auto& nodes = mesh.space().triangles()[tri];
  double value = 0.0;
  for (int a = 0; a < 3; ++a) value += bary[a] * u.nodal(m, nodes[a]);
  return value;
}

}  // namespace

double eval_state(const StateField& u, double x, double y, double t) {
  return eval_slab_field(u, x, y, t);
}

double eval_adjoint(const AdjointField& phi, double x, double y, double t) {
  return eval_slab_field(phi, x, y, t);
}

double eval_control(const ControlField& q, double x, double y, double t) {
  const auto& mesh = *q.mesh();
  const auto& time = mesh.time();
  if (t < 0.0 || t > time.final_time()) throw std::out_of_range("eval: time outside [0, T]");
  const int m = time.slab_of(t);
  const double s = (t - time.points()[m - 1]) / time.step(m);
  const auto [tri, bary] = mesh.space().locate(x, y);
  const auto& nodes = mesh.space().triangles()[tri];
  double value = 0.0;
  for (int a = 0; a < 3; ++a)
    value += bary[a] * ((1.0 - s) * q.at(m - 1, nodes[a]) + s * q.at(m, nodes[a]));
  return value;
}

ControlField project_onto_bounds(const ControlField& q, const BoundSet& bounds) {
  ControlField out = q;
  for (Eigen::Index i : bounds.constrained)
    out.values()[i] = std::clamp(out.values()[i], bounds.lower, bounds.upper);
  for (Eigen::Index i : bounds.pinned) out.values()[i] = 0.0;
  return out;
}

}  // namespace dbc
