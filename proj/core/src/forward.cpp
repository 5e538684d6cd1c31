#include "dbc/forward.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace dbc {

struct SlabSolver::Impl {
  bool direct = true;
  // keyed by step length; uniform partitions hold one entry
  std::map<double, std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix>>> factors;
  std::map<double, SparseMatrix> matrices;
  SlabSolverOptions options;
};

SlabSolver::SlabSolver(DiscretizationPtr disc, SlabSolverOptions options)
    : disc_(std::move(disc)), impl_(std::make_unique<Impl>()) {
  impl_->options = options;
  impl_->direct = disc_->num_interior() < options.direct_limit;
  for (int m = 1; m <= disc_->steps(); ++m) {
    const double k = disc_->step(m);
    if (impl_->matrices.count(k)) continue;
    SparseMatrix a = disc_->mass_interior() + k * disc_->stiffness_interior();
    if (impl_->direct && a.rows() > 0) {
      auto f = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix>>(a);
      if (f->info() != Eigen::Success) throw SolverError("slab matrix factorization failed", m, 0.0);
      impl_->factors.emplace(k, std::move(f));
    }
    impl_->matrices.emplace(k, std::move(a));
  }
}

SlabSolver::~SlabSolver() = default;
SlabSolver::SlabSolver(SlabSolver&&) noexcept = default;
SlabSolver& SlabSolver::operator=(SlabSolver&&) noexcept = default;

bool SlabSolver::uses_direct() const { return impl_->direct; }

Vector SlabSolver::solve(int m, const Vector& rhs) const {
  if (rhs.size() == 0) return rhs;
  const double k = disc_->step(m);
  if (impl_->direct) {
    Vector x = impl_->factors.at(k)->solve(rhs);
    if (!x.allFinite()) throw SolverError("slab solve produced non-finite values", m, 0.0);
    return x;
  }
  const SparseMatrix& a = impl_->matrices.at(k);
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(impl_->options.cg_tolerance);
  cg.setMaxIterations(impl_->options.cg_max_iterations);
  cg.compute(a);
  Vector x = cg.solve(rhs);
  if (cg.info() != Eigen::Success) {
    throw SolverError("slab CG did not converge on slab " + std::to_string(m), m, cg.error());
  }
  return x;
}

StateData zero_state_data(const Discretization& disc) {
  StateData d;
  d.initial_load = Vector::Zero(disc.num_interior());
  d.source.assign(static_cast<std::size_t>(disc.steps()), Vector::Zero(disc.num_interior()));
  return d;
}

StateData make_state_data(const Discretization& disc, const SpaceTimeFunction& f,
                          const std::function<double(double, double)>& u0, const PrismRule& rule) {
  StateData d = zero_state_data(disc);
  if (u0) d.initial_load = assemble_initial_load(disc, u0, rule.space);
  if (f)
    for (int m = 1; m <= disc.steps(); ++m) d.source[static_cast<std::size_t>(m - 1)] = assemble_source(disc, f, m, rule);
  return d;
}

StateField solve_state(const SlabSolver& solver, const StateData& data, const ControlField& q) {
  const Discretization& disc = solver.disc();
  StateField w(disc.mesh_ptr());
  Vector history = data.initial_load;  // M w_{m-1}
  for (int m = 1; m <= disc.steps(); ++m) {
    const Vector rhs = history + data.source[static_cast<std::size_t>(m - 1)] - assemble_coupling(disc, q, m);
    w.slab(m) = solver.solve(m, rhs);
    history = disc.mass_interior() * w.slab(m);
  }
  return w;
}

StateField solve_state_sensitivity(const SlabSolver& solver, const ControlField& dq) {
  return solve_state(solver, zero_state_data(solver.disc()), dq);
}

double state_form(const Discretization& disc, const StateField& w, const StateField& v) {
  double total = 0.0;
  Vector prev = Vector::Zero(disc.num_interior());
  for (int m = 1; m <= disc.steps(); ++m) {
    const Vector& wm = w.slab(m);
    total += (wm - prev).dot(disc.mass_interior() * v.slab(m));
    total += disc.step(m) * wm.dot(disc.stiffness_interior() * v.slab(m));
    prev = wm;
  }
  return total;
}

double state_energy(const Discretization& disc, const StateField& v) {
  double total = 0.0;
  for (int m = 1; m <= disc.steps(); ++m)
    total += disc.step(m) * v.slab(m).dot(disc.stiffness_interior() * v.slab(m));
  return total;
}

}  // namespace dbc
