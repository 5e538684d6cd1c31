#include "dbc/assembly.hpp"

#include <ostream>
#include <vector>

#include <Eigen/SparseCholesky>

namespace dbc {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

Point2 physical(const Triangulation& tri, std::size_t t, const std::array<double, 3>& bary) {
  const auto& nodes = tri.triangles()[t];
  Point2 p;
  for (int a = 0; a < 3; ++a) {
    p.x += bary[a] * tri.vertices()[nodes[a]].x;
    p.y += bary[a] * tri.vertices()[nodes[a]].y;
  }
  return p;
}

SparseMatrix select(const SparseMatrix& a, const std::vector<int>& rows, const std::vector<int>& row_map,
                    const std::vector<int>* col_map, Eigen::Index ncols) {
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros()));
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      const int r = row_map[static_cast<std::size_t>(it.row())];
      if (r < 0) continue;
      const int cc = col_map ? (*col_map)[static_cast<std::size_t>(it.col())] : static_cast<int>(it.col());
      if (cc < 0) continue;
      trip.emplace_back(r, cc, it.value());
    }
  }
  SparseMatrix out(static_cast<Eigen::Index>(rows.size()), ncols);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace

Eigen::Matrix3d element_stiffness(const Point2& a, const Point2& b, const Point2& c) {
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  if (!(det > 0.0)) throw AssemblyError("element_stiffness: non-positive triangle area");
  // gradients of barycentric coordinates: grad lambda_i = rot(edge opposite i) / det
  const std::array<Point2, 3> grad = {Point2{(b.y - c.y) / det, (c.x - b.x) / det},
                                      Point2{(c.y - a.y) / det, (a.x - c.x) / det},
                                      Point2{(a.y - b.y) / det, (b.x - a.x) / det}};
  const double area = 0.5 * det;
  Eigen::Matrix3d k;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) k(i, j) = area * (grad[i].x * grad[j].x + grad[i].y * grad[j].y);
  return k;
}

Eigen::Matrix3d element_mass(double area) {
  Eigen::Matrix3d m;
  m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  return m * (area / 12.0);
}

Eigen::Matrix2d time_mass(double k) {
  Eigen::Matrix2d m;
  m << 2, 1, 1, 2;
  return m * (k / 6.0);
}

Eigen::Matrix2d time_stiffness(double k) {
  Eigen::Matrix2d s;
  s << 1, -1, -1, 1;
  return s / k;
}

SpatialMatrices assemble_mass_stiffness(const Triangulation& tri) {
  const auto n = static_cast<Eigen::Index>(tri.num_vertices());
  Triplets mt, st;
  mt.reserve(9 * tri.num_triangles());
  st.reserve(9 * tri.num_triangles());
  for (std::size_t t = 0; t < tri.num_triangles(); ++t) {
    const auto& nodes = tri.triangles()[t];
    const auto& v = tri.vertices();
    Eigen::Matrix3d ke;
    try {
      ke = element_stiffness(v[nodes[0]], v[nodes[1]], v[nodes[2]]);
    } catch (const AssemblyError&) {
      throw AssemblyError("assemble_mass_stiffness: triangle " + std::to_string(t) + " is degenerate");
    }
    const Eigen::Matrix3d me = element_mass(tri.signed_area(t));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        mt.emplace_back(nodes[a], nodes[b], me(a, b));
        st.emplace_back(nodes[a], nodes[b], ke(a, b));
      }
  }
  SpatialMatrices out{SparseMatrix(n, n), SparseMatrix(n, n)};
  out.mass.setFromTriplets(mt.begin(), mt.end());
  out.stiffness.setFromTriplets(st.begin(), st.end());
  return out;
}

SparseMatrix assemble_control_seminorm(const SpaceTimeMesh& mesh, const SpatialMatrices& spatial) {
  const int steps = mesh.steps();
  const int levels = steps - 1;
  const auto nodes = static_cast<int>(mesh.space().num_vertices());
  SparseMatrix a(static_cast<Eigen::Index>(levels) * nodes, static_cast<Eigen::Index>(levels) * nodes);
  if (levels <= 0) return a;

  // Global 1-D tridiagonal matrices on levels 1..M-1 (levels 0 and M dropped).
  Eigen::MatrixXd mt = Eigen::MatrixXd::Zero(steps + 1, steps + 1);
  Eigen::MatrixXd st = Eigen::MatrixXd::Zero(steps + 1, steps + 1);
  for (int m = 1; m <= steps; ++m) {
    const double k = mesh.time().step(m);
    mt.block<2, 2>(m - 1, m - 1) += time_mass(k);
    st.block<2, 2>(m - 1, m - 1) += time_stiffness(k);
  }

  Triplets trip;
  trip.reserve(static_cast<std::size_t>(spatial.mass.nonZeros()) * 3 * levels);
  for (int l = 1; l <= levels; ++l) {
    for (int lp = std::max(1, l - 1); lp <= std::min(levels, l + 1); ++lp) {
      const double tm = mt(l, lp), ts = st(l, lp);
      for (Eigen::Index c = 0; c < spatial.mass.outerSize(); ++c) {
        SparseMatrix::InnerIterator im(spatial.mass, c);
        SparseMatrix::InnerIterator is(spatial.stiffness, c);
        // identical sparsity patterns: both come from the same element loop
        for (; im && is; ++im, ++is) {
          const double value = is.value() * tm + im.value() * ts;
          trip.emplace_back(ControlField::dof(l, static_cast<int>(im.row()), nodes),
                            ControlField::dof(lp, static_cast<int>(im.col()), nodes), value);
        }
      }
    }
  }
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

Discretization::Discretization(MeshPtr mesh)
    : mesh_(std::move(mesh)), spatial_(assemble_mass_stiffness(mesh_->space())) {
  const auto& tri = mesh_->space();
  std::vector<int> row_map(tri.num_vertices());
  for (std::size_t v = 0; v < tri.num_vertices(); ++v) row_map[v] = tri.interior_index(static_cast<int>(v));
  const auto& rows = tri.interior_nodes();
  const auto nfull = static_cast<Eigen::Index>(tri.num_vertices());
  const auto nint = static_cast<Eigen::Index>(rows.size());
  mass_if_ = select(spatial_.mass, rows, row_map, nullptr, nfull);
  stiffness_if_ = select(spatial_.stiffness, rows, row_map, nullptr, nfull);
  mass_ii_ = select(spatial_.mass, rows, row_map, &row_map, nint);
  stiffness_ii_ = select(spatial_.stiffness, rows, row_map, &row_map, nint);
  seminorm_ = assemble_control_seminorm(*mesh_, spatial_);
}

Vector Discretization::extend(const Vector& interior) const {
  Vector full = Vector::Zero(num_nodes());
  const auto& nodes = space().interior_nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) full[nodes[i]] = interior[static_cast<Eigen::Index>(i)];
  return full;
}

Vector Discretization::restrict(const Vector& full) const {
  const auto& nodes = space().interior_nodes();
  Vector out(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) out[static_cast<Eigen::Index>(i)] = full[nodes[i]];
  return out;
}

Vector assemble_coupling(const Discretization& disc, const ControlField& q, int m) {
  if (m < 1 || m > disc.steps())
    throw std::out_of_range("assemble_coupling: slab " + std::to_string(m) + " out of range");
  const Vector prev = q.level(m - 1);
  const Vector next = q.level(m);
  const double k = disc.step(m);
  return disc.mass_rows() * (next - prev) + (0.5 * k) * (disc.stiffness_rows() * (next + prev));
}

Vector assemble_source(const Discretization& disc, const SpaceTimeFunction& f, int m,
                       const PrismRule& rule) {
  const HatLoads hat = assemble_hat_loads(disc, f, m, rule);
  return disc.restrict(hat.left + hat.right);
}

HatLoads assemble_hat_loads(const Discretization& disc, const SpaceTimeFunction& g, int m,
                            const PrismRule& rule) {
  const auto& tri = disc.space();
  const auto& time = disc.mesh().time();
  const double t0 = time.points()[m - 1];
  const double k = time.step(m);
  HatLoads out{Vector::Zero(disc.num_nodes()), Vector::Zero(disc.num_nodes())};
  for (std::size_t t = 0; t < tri.num_triangles(); ++t) {
    const auto& nodes = tri.triangles()[t];
    const double area = tri.signed_area(t);
    for (std::size_t qs = 0; qs < rule.space.points.size(); ++qs) {
      const auto& bary = rule.space.points[qs];
      const Point2 p = physical(tri, t, bary);
      for (std::size_t qt = 0; qt < rule.time.points.size(); ++qt) {
        const double s = rule.time.points[qt];
        const double w = area * rule.space.weights[qs] * k * rule.time.weights[qt];
        const double value = w * g(p.x, p.y, t0 + s * k);
        for (int a = 0; a < 3; ++a) {
          out.left[nodes[a]] += value * (1.0 - s) * bary[a];
          out.right[nodes[a]] += value * s * bary[a];
        }
      }
    }
  }
  return out;
}

Vector assemble_tracking(const Discretization& disc, const SpaceTimeFunction& u_d, const StateField& w,
                         const ControlField& q, int m, const PrismRule& rule) {
  const auto& tri = disc.space();
  const auto& time = disc.mesh().time();
  const double t0 = time.points()[m - 1];
  const double k = time.step(m);
  const Vector q0 = q.level(m - 1);
  const Vector q1 = q.level(m);
  Vector full = Vector::Zero(disc.num_nodes());
  for (std::size_t t = 0; t < tri.num_triangles(); ++t) {
    const auto& nodes = tri.triangles()[t];
    const double area = tri.signed_area(t);
    for (std::size_t qs = 0; qs < rule.space.points.size(); ++qs) {
      const auto& bary = rule.space.points[qs];
      const Point2 p = physical(tri, t, bary);
      double wv = 0.0, qv0 = 0.0, qv1 = 0.0;
      for (int a = 0; a < 3; ++a) {
        wv += bary[a] * w.nodal(m, nodes[a]);
        qv0 += bary[a] * q0[nodes[a]];
        qv1 += bary[a] * q1[nodes[a]];
      }
      for (std::size_t qt = 0; qt < rule.time.points.size(); ++qt) {
        const double s = rule.time.points[qt];
        const double weight = area * rule.space.weights[qs] * k * rule.time.weights[qt];
        const double residual = wv + (1.0 - s) * qv0 + s * qv1 - u_d(p.x, p.y, t0 + s * k);
        for (int a = 0; a < 3; ++a) full[nodes[a]] += weight * residual * bary[a];
      }
    }
  }
  return disc.restrict(full);
}

Vector assemble_initial_load(const Discretization& disc, const std::function<double(double, double)>& u0,
                             const TriangleRule& rule) {
  const auto& tri = disc.space();
  Vector full = Vector::Zero(disc.num_nodes());
  for (std::size_t t = 0; t < tri.num_triangles(); ++t) {
    const auto& nodes = tri.triangles()[t];
    const double area = tri.signed_area(t);
    for (std::size_t qs = 0; qs < rule.points.size(); ++qs) {
      const auto& bary = rule.points[qs];
      const Point2 p = physical(tri, t, bary);
      const double value = area * rule.weights[qs] * u0(p.x, p.y);
      for (int a = 0; a < 3; ++a) full[nodes[a]] += value * bary[a];
    }
  }
  return disc.restrict(full);
}

Vector l2_project_initial(const Discretization& disc, const std::function<double(double, double)>& u0,
                          const TriangleRule& rule) {
  const Vector load = assemble_initial_load(disc, u0, rule);
  if (load.size() == 0) return load;
  Eigen::SimplicialLLT<SparseMatrix> chol(disc.mass_interior());
  if (chol.info() != Eigen::Success)
    throw AssemblyError("l2_project_initial: mass matrix factorization failed");
  Vector c = chol.solve(load);
  if (chol.info() != Eigen::Success) throw AssemblyError("l2_project_initial: solve failed");
  return c;
}

double integrate(const Discretization& disc, const SpaceTimeFunction& g, const PrismRule& rule) {
  const auto& tri = disc.space();
  const auto& time = disc.mesh().time();
  double total = 0.0;
  for (int m = 1; m <= disc.steps(); ++m) {
    const double t0 = time.points()[m - 1];
    const double k = time.step(m);
    for (std::size_t t = 0; t < tri.num_triangles(); ++t) {
      const double area = tri.signed_area(t);
      for (std::size_t qs = 0; qs < rule.space.points.size(); ++qs) {
        const Point2 p = physical(tri, t, rule.space.points[qs]);
        for (std::size_t qt = 0; qt < rule.time.points.size(); ++qt)
          total += area * rule.space.weights[qs] * k * rule.time.weights[qt] *
                   g(p.x, p.y, t0 + rule.time.points[qt] * k);
      }
    }
  }
  return total;
}

void write_matrix_market(std::ostream& os, const SparseMatrix& a) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  os.precision(17);
  for (Eigen::Index c = 0; c < a.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(a, c); it; ++it)
      os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

}  // namespace dbc
