#include <gtest/gtest.h>

#include <cmath>

#include "dbc/spaces.hpp"

using namespace dbc;

namespace {
double example_q(double x, double y, double t) { return x * std::exp(y) * (1 - x) * (1 - y) * t * (1 - t); }
}  // namespace

TEST(ControlField, Layout) {
  const auto mesh = make_space_time_mesh(3, 4);
  ControlField q(mesh);
  EXPECT_EQ(q.num_nodes(), 16);
  EXPECT_EQ(q.num_levels(), 3);
  EXPECT_EQ(q.values().size(), 48);
  EXPECT_EQ(ControlField::dof(2, 5, 16), 21);
  q.values()[ControlField::dof(2, 5, 16)] = 7.0;
  EXPECT_EQ(q.at(2, 5), 7.0);
  EXPECT_EQ(q.at(0, 5), 0.0);
  EXPECT_EQ(q.at(4, 5), 0.0);
  EXPECT_EQ(q.level(0).size(), 16);
  EXPECT_EQ(q.level(4).norm(), 0.0);
}

TEST(StateField, Layout) {
  const auto mesh = make_space_time_mesh(3, 4);
  StateField w(mesh);
  EXPECT_EQ(w.steps(), 4);
  EXPECT_EQ(w.slab(1).size(), 4);
  const int v = mesh->space().interior_nodes()[2];
  w.slab(3)[2] = 1.5;
  EXPECT_EQ(w.nodal(3, v), 1.5);
  EXPECT_EQ(w.nodal(3, 0), 0.0);  // boundary vertex
}

TEST(Interpolate, ZeroAndExampleValue) {
  const auto mesh = make_space_time_mesh(2, 2);
  const auto zero = interpolate_control(mesh, [](double, double, double) { return 0.0; });
  EXPECT_EQ(zero.values().norm(), 0.0);
  const auto q = interpolate_control(mesh, example_q);
  // node (0.5, 0) is vertex 1, level t = 0.5
  EXPECT_NEAR(q.at(1, 1), 0.0625, 1e-15);
}

TEST(Interpolate, ReproducesNodalValues) {
  const auto mesh = make_space_time_mesh(3, 3);
  auto g = [](double x, double y, double t) { return 1.0 + 2.0 * x - y + 3.0 * t + x * t; };
  const auto q = interpolate_control(mesh, g);
  for (int l = 1; l < 3; ++l)
    for (std::size_t v = 0; v < mesh->space().num_vertices(); ++v) {
      const auto& p = mesh->space().vertices()[v];
      const double t = mesh->time().points()[l];
      EXPECT_NEAR(eval_control(q, p.x, p.y, t), g(p.x, p.y, t), 1e-14);
    }
}

TEST(Evaluate, ControlIsMultilinear) {
  const auto mesh = make_space_time_mesh(2, 2);
  auto g = [](double x, double y, double t) { return (0.5 + x + y) * t * (1 - t); };
  const auto q = interpolate_control(mesh, g);
  // linear in time between t = 0 (zero) and t = 0.5 on the first slab
  const double at_half = eval_control(q, 0.2, 0.1, 0.5);
  EXPECT_NEAR(eval_control(q, 0.2, 0.1, 0.25), 0.5 * at_half, 1e-15);
  EXPECT_NEAR(at_half, (0.5 + 0.2 + 0.1) * 0.25, 1e-15);
  EXPECT_EQ(eval_control(q, 0.2, 0.1, 0.0), 0.0);
  EXPECT_EQ(eval_control(q, 0.2, 0.1, 1.0), 0.0);
}

TEST(Evaluate, StatePartitionOfUnityAndSlabs) {
  const auto mesh = make_space_time_mesh(1, 1);
  StateField zero(mesh);
  EXPECT_EQ(eval_state(zero, 0.3, 0.3, 0.5), 0.0);

  const auto fine = make_space_time_mesh(2, 2);
  StateField w(fine);
  w.slab(1)[0] = 1.0;
  w.slab(2)[0] = 3.0;
  EXPECT_NEAR(eval_state(w, 0.5, 0.5, 0.5), 1.0, 1e-15);  // t in (0, 0.5]
  EXPECT_NEAR(eval_state(w, 0.5, 0.5, 0.51), 3.0, 1e-15);
  // hand interpolation inside triangle (0,0),(0.5,0),(0.5,0.5): lambda of (0.5,0.5) at (0.4,0.1) is 0.2
  EXPECT_NEAR(eval_state(w, 0.4, 0.1, 0.25), 0.2, 1e-14);
  EXPECT_THROW(eval_state(w, 0.5, 0.5, 0.0), std::out_of_range);
  EXPECT_THROW(eval_state(w, 1.2, 0.5, 0.3), std::out_of_range);
}

TEST(BoundSet, BoundaryTimesInteriorLevels) {
  const auto mesh = make_space_time_mesh(4, 5);
  const auto b = make_bound_set(*mesh, 0.0, 0.8);
  EXPECT_EQ(b.constrained.size(), 16u * 4u);
  EXPECT_TRUE(b.pinned.empty());
  for (auto i : b.constrained) EXPECT_TRUE(mesh->space().is_boundary(static_cast<int>(i % 25)));
  EXPECT_THROW(make_bound_set(*mesh, 0.1, 0.8), std::invalid_argument);
  EXPECT_THROW(make_bound_set(*mesh, -1.0, -0.1), std::invalid_argument);
}

TEST(BoundSet, BottomEdgeContact) {
  const auto mesh = make_space_time_mesh(4, 3);
  const auto b = make_bound_set(*mesh, 0.0, 0.8, ContactBoundary::bottom);
  EXPECT_EQ(b.constrained.size(), 3u * 2u);
  EXPECT_EQ(b.pinned.size(), 13u * 2u);
}

TEST(Project, ClampsOnlyConstrained) {
  const auto mesh = make_space_time_mesh(2, 2);
  const auto b = make_bound_set(*mesh, 0.0, 0.8);
  ControlField q(mesh, Vector::Constant(9, 1.0));
  const auto p = project_onto_bounds(q, b);
  EXPECT_EQ(p.at(1, 0), 0.8);  // boundary
  EXPECT_EQ(p.at(1, 4), 1.0);  // interior vertex
  const auto pp = project_onto_bounds(p, b);
  EXPECT_EQ(pp.values(), p.values());
  ControlField inside(mesh, Vector::Constant(9, 0.3));
  EXPECT_EQ(project_onto_bounds(inside, b).values(), inside.values());
}
