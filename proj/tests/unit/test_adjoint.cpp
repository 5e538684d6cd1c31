#include <gtest/gtest.h>

#include <random>

#include "dbc/adjoint.hpp"
#include "dense_oracle.hpp"

using namespace dbc;

namespace {

Vector random_vector(Eigen::Index size, std::mt19937& rng) {
  std::normal_distribution<double> d;
  Vector v(size);
  for (auto& x : v) x = d(rng);
  return v;
}

struct Level {
  MeshPtr mesh;
  DiscretizationPtr disc;
  std::shared_ptr<SlabSolver> solver;
  Level(int n, int steps)
      : mesh(make_space_time_mesh(n, steps)),
        disc(std::make_shared<const Discretization>(mesh)),
        solver(std::make_shared<SlabSolver>(disc)) {}
  std::vector<Vector> random_tracking(std::mt19937& rng) const {
    std::vector<Vector> g;
    for (int m = 1; m <= disc->steps(); ++m) g.push_back(random_vector(disc->num_interior(), rng));
    return g;
  }
};

}  // namespace

TEST(SolveAdjoint, ZeroTracking) {
  Level s(3, 1);
  const auto phi = solve_adjoint(*s.solver, std::vector<Vector>(1, Vector::Zero(4)));
  EXPECT_EQ(phi.slab(1).norm(), 0.0);
  EXPECT_THROW(solve_adjoint(*s.solver, std::vector<Vector>{}), std::invalid_argument);
}

TEST(SolveAdjoint, TransposedDenseSystem) {
  Level s(3, 4);
  std::mt19937 rng(5);
  const auto g = s.random_tracking(rng);
  const auto phi = solve_adjoint(*s.solver, g);
  oracle::DenseOracle o(s.mesh);
  Vector flat(16);
  for (int m = 1; m <= 4; ++m) flat.segment((m - 1) * 4, 4) = g[m - 1];
  const Vector ref = o.state_block().transpose().partialPivLu().solve(flat);
  for (int m = 1; m <= 4; ++m) EXPECT_LT((phi.slab(m) - ref.segment((m - 1) * 4, 4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SolveAdjoint, ConsistentTargetGivesZero) {
  Level s(3, 3);
  std::mt19937 rng(2);
  StateField w(s.mesh);
  for (int m = 1; m <= 3; ++m) w.slab(m) = random_vector(4, rng);
  const ControlField q(s.mesh, random_vector(32, rng));
  auto u = [&](double x, double y, double t) { return eval_state(w, x, y, t) + eval_control(q, x, y, t); };
  const auto phi = solve_adjoint(*s.solver, u, w, q);
  for (int m = 1; m <= 3; ++m) EXPECT_LT(phi.slab(m).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(DualityIdentity, RandomInstances) {
  for (unsigned seed : {0u, 1u, 2u}) {
    Level s(2, 2);
    std::mt19937 rng(seed);
    const ControlField dq(s.mesh, random_vector(9, rng));
    EXPECT_LT(adjoint_identity_check(*s.solver, dq, s.random_tracking(rng)), 1e-10);
  }
  Level s(4, 5);
  std::mt19937 rng(9);
  for (int i = 0; i < 5; ++i) {
    const ControlField dq(s.mesh, random_vector(100, rng));
    EXPECT_LT(adjoint_identity_check(*s.solver, dq, s.random_tracking(rng)), 1e-10);
  }
}

TEST(DualityIdentity, DegenerateArguments) {
  Level s(2, 2);
  std::mt19937 rng(4);
  EXPECT_EQ(adjoint_identity_check(*s.solver, ControlField(s.mesh), s.random_tracking(rng)), 0.0);
  const ControlField dq(s.mesh, random_vector(9, rng));
  EXPECT_EQ(adjoint_identity_check(*s.solver, dq, std::vector<Vector>(2, Vector::Zero(1))), 0.0);
}

TEST(DualityIdentity, PairingsMatchDenseOracle) {
  Level s(3, 3);
  std::mt19937 rng(8);
  const ControlField dq(s.mesh, random_vector(32, rng));
  const auto g = s.random_tracking(rng);
  const auto phi = solve_adjoint(*s.solver, g);
  oracle::DenseOracle o(s.mesh);
  Vector flat_phi(12);
  for (int m = 1; m <= 3; ++m) flat_phi.segment((m - 1) * 4, 4) = phi.slab(m);
  // B(dq, phi) from the oracle's coupling block
  EXPECT_NEAR(coupling_pairing(*s.disc, dq, phi), flat_phi.dot(o.coupling_block() * dq.values()), 1e-12);
}
