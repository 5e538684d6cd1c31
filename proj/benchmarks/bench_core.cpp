#include <benchmark/benchmark.h>

#include "dbc/manufactured.hpp"

using namespace dbc;

namespace {

struct Level {
  MeshPtr mesh;
  std::shared_ptr<SlabSolver> solver;
  std::unique_ptr<ReducedProblem> problem;
  Level(int n, int steps) : mesh(make_space_time_mesh(n, steps)) {
    const auto mc = example51();
    solver = std::make_shared<SlabSolver>(std::make_shared<const Discretization>(mesh));
    problem = std::make_unique<ReducedProblem>(solver, mc.lambda, make_bound_set(*mesh, mc.lower, mc.upper),
                                               mc.problem_data());
  }
};

void level_args(benchmark::internal::Benchmark* b) {
  for (const auto& l : reference_levels()) b->Args({l.n, l.steps});
}

}  // namespace

static void BM_Discretization(benchmark::State& state) {
  const auto mesh = make_space_time_mesh(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(Discretization(mesh));
}
BENCHMARK(BM_Discretization)->Apply(level_args)->Unit(benchmark::kMillisecond);

static void BM_SlabFactorization(benchmark::State& state) {
  const auto disc = std::make_shared<const Discretization>(
      make_space_time_mesh(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))));
  for (auto _ : state) benchmark::DoNotOptimize(SlabSolver(disc));
}
BENCHMARK(BM_SlabFactorization)->Apply(level_args)->Unit(benchmark::kMillisecond);

static void BM_ForwardSweep(benchmark::State& state) {
  Level l(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto q = interpolate_control(l.mesh, example51().control);
  for (auto _ : state) benchmark::DoNotOptimize(solve_state_sensitivity(*l.solver, q));
}
BENCHMARK(BM_ForwardSweep)->Apply(level_args)->Unit(benchmark::kMillisecond);

static void BM_HessianVec(benchmark::State& state) {
  Level l(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto q = interpolate_control(l.mesh, example51().control);
  for (auto _ : state) benchmark::DoNotOptimize(l.problem->hessian_vec(q));
}
BENCHMARK(BM_HessianVec)->Apply(level_args)->Unit(benchmark::kMillisecond);

static void BM_PdasSolve(benchmark::State& state) {
  Level l(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(pdas_solve(*l.problem, ControlField(l.mesh)));
}
BENCHMARK(BM_PdasSolve)->Args({8, 6})->Args({16, 12})->Args({32, 23})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
