#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dbc/forward.hpp"
#include "dense_oracle.hpp"

using namespace dbc;

namespace {

struct Level {
  MeshPtr mesh;
  DiscretizationPtr disc;
  std::shared_ptr<SlabSolver> solver;
  explicit Level(int n, int steps, SlabSolverOptions opt = {})
      : mesh(make_space_time_mesh(n, steps)),
        disc(std::make_shared<const Discretization>(mesh)),
        solver(std::make_shared<SlabSolver>(disc, opt)) {}
};

Vector random_vector(Eigen::Index size, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Vector v(size);
  for (auto& x : v) x = d(rng);
  return v;
}

Vector flatten(const StateField& w) {
  Vector out(w.steps() * w.slab(1).size());
  for (int m = 1; m <= w.steps(); ++m) out.segment((m - 1) * w.slab(1).size(), w.slab(1).size()) = w.slab(m);
  return out;
}

}  // namespace

TEST(SolveState, ZeroDataZeroControl) {
  Level s(4, 3);
  const auto w = solve_state(*s.solver, zero_state_data(*s.disc), ControlField(s.mesh));
  for (int m = 1; m <= 3; ++m) EXPECT_EQ(w.slab(m).norm(), 0.0);
}

TEST(SolveState, SingleNodeByHand) {
  // n = 2: one interior node with mass 1/8 and stiffness 4; f = 1 gives load 1/4
  Level s(2, 1);
  const auto data = make_state_data(*s.disc, [](double, double, double) { return 1.0; }, nullptr);
  const auto w = solve_state(*s.solver, data, ControlField(s.mesh));
  EXPECT_NEAR(w.slab(1)[0], 0.25 / (0.125 + 4.0), 1e-15);
}

TEST(SolveState, MatchesDenseOracle) {
  Level s(3, 4);
  auto f = [](double x, double y, double t) { return 1.0 + x * y * t - 2.0 * y * y; };
  auto u0 = [](double x, double y) { return x * y + 0.5; };
  const auto data = make_state_data(*s.disc, f, u0);
  const ControlField q(s.mesh, random_vector(48, 7));
  const auto w = solve_state(*s.solver, data, q);
  oracle::DenseOracle o(s.mesh);
  const Vector ref = o.state(q.values(), o.state_load(f, u0));
  EXPECT_LT((flatten(w) - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SolveState, GalerkinConsistency) {
  // u = (a + bx + cy) h(t) with h a hat on the time mesh solves the heat
  // equation with f = d_t u; it lies in Q_sigma, so w must vanish.
  Level s(4, 4);
  auto spatial = [](double x, double y) { return 0.3 + 0.7 * x - 0.4 * y; };
  auto hat = [](double t) { return t <= 0.5 ? 2.0 * t : 2.0 * (1.0 - t); };
  auto dhat = [](double t) { return t <= 0.5 ? 2.0 : -2.0; };
  const auto q = interpolate_control(s.mesh, [&](double x, double y, double t) { return spatial(x, y) * hat(t); });
  const auto data =
      make_state_data(*s.disc, [&](double x, double y, double t) { return spatial(x, y) * dhat(t); }, nullptr);
  const auto w = solve_state(*s.solver, data, q);
  for (int m = 1; m <= 4; ++m) EXPECT_LT(w.slab(m).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Sensitivity, LinearAndSameCodePath) {
  Level s(3, 3);
  const ControlField dq(s.mesh, random_vector(32, 3));
  const auto a = solve_state_sensitivity(*s.solver, dq);
  const auto b = solve_state_sensitivity(*s.solver, ControlField(s.mesh, 2.5 * dq.values()));
  const auto c = solve_state(*s.solver, zero_state_data(*s.disc), dq);
  for (int m = 1; m <= 3; ++m) {
    EXPECT_LT((2.5 * a.slab(m) - b.slab(m)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((a.slab(m) - c.slab(m)).cwiseAbs().maxCoeff(), 1e-15);
  }
  EXPECT_EQ(flatten(solve_state_sensitivity(*s.solver, ControlField(s.mesh))).norm(), 0.0);
}

TEST(SlabSolver, IterativePathAgreesWithDirect) {
  Level direct(6, 3);
  SlabSolverOptions opt;
  opt.direct_limit = 0;
  Level iterative(6, 3, opt);
  EXPECT_TRUE(direct.solver->uses_direct());
  EXPECT_FALSE(iterative.solver->uses_direct());
  const ControlField q(direct.mesh, random_vector(98, 11));
  const auto a = solve_state_sensitivity(*direct.solver, q);
  const auto b = solve_state_sensitivity(*iterative.solver, ControlField(iterative.mesh, q.values()));
  for (int m = 1; m <= 3; ++m) EXPECT_LT((a.slab(m) - b.slab(m)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SlabSolver, NonConvergenceReportsSlab) {
  SlabSolverOptions opt;
  opt.direct_limit = 0;
  opt.cg_max_iterations = 1;
  Level s(8, 2, opt);
  try {
    solve_state_sensitivity(*s.solver, ControlField(s.mesh, random_vector(81, 1)));
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.slab(), 1);
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(StateForm, CoercivityOnRandomStates) {
  for (int n = 2; n <= 4; ++n) {
    Level s(n, 3);
    for (unsigned seed = 0; seed < 20; ++seed) {
      StateField v(s.mesh);
      const Vector r = random_vector(3 * s.disc->num_interior(), seed);
      for (int m = 1; m <= 3; ++m) v.slab(m) = r.segment((m - 1) * s.disc->num_interior(), s.disc->num_interior());
      EXPECT_GE(state_form(*s.disc, v, v), state_energy(*s.disc, v) - 1e-14);
    }
  }
}

TEST(Stability, BoundedAcrossLevels) {
  auto f = [](double x, double y, double t) { return std::sin(3 * x) * std::cos(2 * y) * (1 + t); };
  double first = 0.0;
  for (int n : {4, 8, 16}) {
    Level s(n, n);
    const auto w = solve_state(*s.solver, make_state_data(*s.disc, f, nullptr), ControlField(s.mesh));
    const double e = std::sqrt(state_energy(*s.disc, w));
    if (first == 0.0) first = e;
    EXPECT_LT(e, 2.0 * first);
  }
}
