#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <map>

#include "dbc/mesh.hpp"

using namespace dbc;

TEST(UnitSquareMesh, SmallestMesh) {
  const auto tri = unit_square_mesh(1);
  EXPECT_EQ(tri.num_vertices(), 4u);
  EXPECT_EQ(tri.num_triangles(), 2u);
  EXPECT_EQ(tri.num_interior(), 0u);
  for (std::size_t v = 0; v < 4; ++v) EXPECT_TRUE(tri.is_boundary(static_cast<int>(v)));
}

TEST(UnitSquareMesh, Counts) {
  for (int n : {2, 3, 7}) {
    const auto tri = unit_square_mesh(n);
    EXPECT_EQ(tri.num_vertices(), static_cast<std::size_t>((n + 1) * (n + 1)));
    EXPECT_EQ(tri.num_triangles(), static_cast<std::size_t>(2 * n * n));
    EXPECT_EQ(tri.num_interior(), static_cast<std::size_t>((n - 1) * (n - 1)));
  }
  EXPECT_EQ(unit_square_mesh(2).num_interior(), 1u);
}

TEST(UnitSquareMesh, RejectsZero) { EXPECT_THROW(unit_square_mesh(0), std::invalid_argument); }

TEST(UnitSquareMesh, WidthAndDiameter) {
  const auto tri = unit_square_mesh(4);
  EXPECT_DOUBLE_EQ(tri.nominal_width(), 0.25);
  EXPECT_NEAR(tri.diameter(), 0.25 * std::sqrt(2.0), 1e-15);
}

TEST(UnitSquareMesh, AreasSumToOne) {
  const auto tri = unit_square_mesh(9);
  double total = 0.0;
  for (std::size_t t = 0; t < tri.num_triangles(); ++t) {
    EXPECT_GT(tri.signed_area(t), 0.0);
    total += tri.signed_area(t);
  }
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(UnitSquareMesh, BoundaryFlagsOnEdges) {
  const auto tri = unit_square_mesh(5);
  for (std::size_t v = 0; v < tri.num_vertices(); ++v) {
    const auto& p = tri.vertices()[v];
    const bool edge = p.x == 0.0 || p.x == 1.0 || p.y == 0.0 || p.y == 1.0;
    EXPECT_EQ(edge, tri.is_boundary(static_cast<int>(v)));
  }
}

TEST(UnitSquareMesh, EdgeSharing) {
  const auto tri = unit_square_mesh(4);
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : tri.triangles())
    for (int a = 0; a < 3; ++a) {
      const int i = t[a], j = t[(a + 1) % 3];
      ++count[{std::min(i, j), std::max(i, j)}];
    }
  auto same_side = [&](int i, int j) {
    const auto& p = tri.vertices()[i];
    const auto& q = tri.vertices()[j];
    return (p.x == q.x && (p.x == 0.0 || p.x == 1.0)) || (p.y == q.y && (p.y == 0.0 || p.y == 1.0));
  };
  for (const auto& [edge, c] : count) EXPECT_EQ(c, same_side(edge.first, edge.second) ? 1 : 2);
}

TEST(UnitSquareMesh, LexicographicNumbering) {
  const auto tri = unit_square_mesh(3);
  EXPECT_DOUBLE_EQ(tri.vertices()[1].x, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(tri.vertices()[1].y, 0.0);
  EXPECT_DOUBLE_EQ(tri.vertices()[4].x, 0.0);
  EXPECT_DOUBLE_EQ(tri.vertices()[4].y, 1.0 / 3.0);
}

TEST(Triangulation, RejectsClockwise) {
  std::vector<Point2> v{{0, 0}, {1, 0}, {0, 1}};
  EXPECT_THROW(Triangulation(v, {{0, 2, 1}}, {true, true, true}, 1.0), std::invalid_argument);
  EXPECT_THROW(Triangulation(v, {{0, 1, 1}}, {true, true, true}, 1.0), std::invalid_argument);
}

TEST(Triangulation, Locate) {
  const auto tri = unit_square_mesh(2);
  const auto [t, bary] = tri.locate(0.3, 0.1);
  EXPECT_NEAR(bary[0] + bary[1] + bary[2], 1.0, 1e-15);
  double x = 0, y = 0;
  for (int a = 0; a < 3; ++a) {
    x += bary[a] * tri.vertices()[tri.triangles()[t][a]].x;
    y += bary[a] * tri.vertices()[tri.triangles()[t][a]].y;
  }
  EXPECT_NEAR(x, 0.3, 1e-15);
  EXPECT_NEAR(y, 0.1, 1e-15);
  EXPECT_THROW(tri.locate(1.5, 0.5), std::out_of_range);
}

TEST(Triangulation, BarycentricGradientsSumToZero) {
  const auto tri = unit_square_mesh(3);
  for (std::size_t t = 0; t < tri.num_triangles(); ++t) {
    const auto g = tri.barycentric_gradients(t);
    EXPECT_NEAR(g[0].x + g[1].x + g[2].x, 0.0, 1e-13);
    EXPECT_NEAR(g[0].y + g[1].y + g[2].y, 0.0, 1e-13);
  }
}

TEST(TimePartition, Uniform) {
  const auto tp = uniform_time_partition(4, 1.0);
  EXPECT_EQ(tp.steps(), 4);
  EXPECT_DOUBLE_EQ(tp.max_step(), 0.25);
  EXPECT_EQ(tp.points().front(), 0.0);
  EXPECT_EQ(tp.points().back(), 1.0);
  const auto one = uniform_time_partition(1, 1.0);
  EXPECT_EQ(one.points(), (std::vector<double>{0.0, 1.0}));
}

TEST(TimePartition, Errors) {
  EXPECT_THROW(uniform_time_partition(0, 1.0), std::invalid_argument);
  EXPECT_THROW(uniform_time_partition(3, 0.0), std::invalid_argument);
  EXPECT_THROW(TimePartition({0.0, 0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(TimePartition({0.1, 0.5}), std::invalid_argument);
}

TEST(TimePartition, HalfOpenSlabs) {
  const auto tp = uniform_time_partition(4, 1.0);
  EXPECT_EQ(tp.slab_of(0.0), 1);
  EXPECT_EQ(tp.slab_of(0.25), 1);
  EXPECT_EQ(tp.slab_of(0.2500001), 2);
  EXPECT_EQ(tp.slab_of(1.0), 4);
  EXPECT_THROW(tp.slab_of(1.1), std::out_of_range);
}

TEST(SpaceTimeMesh, SigmaTruncatedToFourDecimals) {
  // reference values are truncated, not rounded
  auto truncated = [](int n, int steps) { return std::floor(make_space_time_mesh(n, steps)->sigma() * 1e4) / 1e4; };
  EXPECT_DOUBLE_EQ(truncated(4, 4), 0.3535);
  EXPECT_DOUBLE_EQ(truncated(8, 6), 0.2083);
  EXPECT_DOUBLE_EQ(truncated(16, 12), 0.1041);
  EXPECT_DOUBLE_EQ(truncated(32, 23), 0.0535);
  EXPECT_DOUBLE_EQ(truncated(64, 46), 0.0267);
}

TEST(SpaceTimeMesh, PrismCountAndWarning) {
  const auto m = make_space_time_mesh(4, 3);
  EXPECT_EQ(m->num_prisms(), 32u * 3u);
  EXPECT_FALSE(m->aspect_warning());
  EXPECT_TRUE(make_space_time_mesh(64, 2)->aspect_warning());
}

TEST(Refine, IdentityAndNesting) {
  const auto coarse = make_space_time_mesh(2, 3);
  const auto same = refine(*coarse, 1, 1);
  EXPECT_EQ(same->subdivisions(), 2);
  EXPECT_EQ(same->steps(), 3);
  const auto fine = refine(*coarse, 2, 2);
  EXPECT_EQ(fine->space().num_vertices(), 25u);
  std::set<std::pair<double, double>> pts;
  for (const auto& p : fine->space().vertices()) pts.insert({p.x, p.y});
  for (const auto& p : coarse->space().vertices()) EXPECT_TRUE(pts.count({p.x, p.y}));
  EXPECT_THROW(refine(*coarse, 0, 1), std::invalid_argument);
}

TEST(WriteMesh, Format) {
  std::ostringstream os;
  write_mesh(os, unit_square_mesh(1));
  EXPECT_EQ(os.str(), "0 0 1\n1 0 1\n0 1 1\n1 1 1\n0 1 3\n0 3 2\n");
}
