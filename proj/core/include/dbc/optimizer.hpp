#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "dbc/adjoint.hpp"
#include "dbc/forward.hpp"

namespace dbc {

/// Data of the tracking functional
///   1/2 ||u - u_d||_I^2 + lambda/2 |q - q_d|_{1, Omega x I}^2.
struct ProblemData {
  SpaceTimeFunction source;                        // f; empty means zero
  std::function<double(double, double)> initial;   // u0; empty means zero
  SpaceTimeFunction target;                        // u_d; empty means zero
  SpaceTimeFunction control_shift;                 // q_d; empty means zero
};

/// Reduced functional j(q) = J(u(q), q) on one discretization.
///
/// All pairings with u_d are precomputed as loads against the two time
/// hats of each slab, so the objective, its gradient and the Hessian share
/// one set of discrete linear functionals and the gradient is exact for the
/// evaluated objective.
class ReducedProblem {
 public:
  ReducedProblem(std::shared_ptr<const SlabSolver> solver, double lambda, BoundSet bounds,
                 const ProblemData& data, const PrismRule& rule = default_prism_rule());

  const SlabSolver& solver() const { return *solver_; }
  const Discretization& disc() const { return solver_->disc(); }
  const MeshPtr& mesh() const { return solver_->disc().mesh_ptr(); }
  double lambda() const { return lambda_; }
  const BoundSet& bounds() const { return bounds_; }
  /// Nodal interpolant of q_d.
  const ControlField& shift() const { return shift_; }
  const StateData& state_data() const { return state_data_; }

  struct Evaluation {
    StateField state;
    AdjointField adjoint;
    ControlField gradient;
    double objective = 0.0;
  };

  StateField state(const ControlField& q) const;
  double objective(const ControlField& q) const;
  /// State, adjoint, gradient and objective at q.
  Evaluation evaluate(const ControlField& q) const;
  ControlField reduced_gradient(const ControlField& q) const;
  /// Exact Hessian action; the problem is linear-quadratic.
  ControlField hessian_vec(const ControlField& dq) const;

  /// Interior tracking loads (u - u_d, phi_i)_{I_m} for u = w + q.
  std::vector<Vector> tracking_loads(const StateField& w, const ControlField& q) const;

  /// Diagonal of lambda * A, used as CG preconditioner.
  const Vector& preconditioner_diagonal() const { return diag_; }

 private:
  double tracking_objective(const StateField& w, const ControlField& q) const;
  /// pairing of (u - u_d) with every control basis function, minus -B(p, phi)
  Vector control_side(const StateField& w, const ControlField& q, const AdjointField& phi,
                      bool with_target) const;

  std::shared_ptr<const SlabSolver> solver_;
  double lambda_;
  BoundSet bounds_;
  StateData state_data_;
  std::vector<HatLoads> target_loads_;
  double target_norm2_ = 0.0;
  ControlField shift_;
  Vector diag_;
};

/// One PDAS outer iteration as seen before its linear solve.
struct PdasIteration {
  int iteration = 0;
  std::size_t active_lower = 0;
  std::size_t active_upper = 0;
  double objective = 0.0;
  double stationarity = 0.0;
  double complementarity = 0.0;
  double infeasibility = 0.0;
  int cg_iterations = 0;
};

struct KKTDiagnostics {
  double stationarity = 0.0;     // max |g_i| over DOFs outside the active sets
  double complementarity = 0.0;  // sign and contact violations on constrained DOFs
  double infeasibility = 0.0;    // max bound violation
  std::size_t active_lower = 0;
  std::size_t active_upper = 0;
  int outer_iterations = 0;
  int cg_iterations = 0;
  bool converged = false;
  double objective = 0.0;
  double scaling = 0.0;  // multiplier scaling in use at the end
  int cycles = 0;        // active-set cycles broken by raising the scaling
  std::vector<PdasIteration> history;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, KKTDiagnostics diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const KKTDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  KKTDiagnostics diagnostics_;
};

struct PdasOptions {
  double tolerance = 1e-10;
  int max_outer = 50;
  /// Scaling of the multiplier in the active-set test; <= 0 selects lambda.
  double scaling = 0.0;
  /// Factor applied to the scaling when an earlier active set recurs.
  double cycle_factor = 10.0;
  /// Relative CG tolerance; <= 0 selects min(1e-10, 1e-2 * tolerance).
  double cg_tolerance = 0.0;
  int cg_max_iterations = 20000;
  std::function<void(const PdasIteration&)> on_iteration;
};

struct PdasResult {
  ControlField control;
  StateField state;
  AdjointField adjoint;
  ControlField gradient;
  /// Gradient entries on the constrained DOFs, in BoundSet order.
  Vector multiplier;
  KKTDiagnostics diagnostics;
};

/// Active sets: -1 lower, +1 upper, 0 inactive, per constrained DOF.
std::vector<int> classify_active(const BoundSet& bounds, const ControlField& q, const ControlField& gradient,
                                 double scaling);

/// Residuals of the discrete Signorini system for a given active-set split.
KKTDiagnostics kkt_residuals(const BoundSet& bounds, const ControlField& q, const ControlField& gradient,
                             const std::vector<int>& active);

/// Primal-dual active set method with matrix-free CG on the inactive DOFs.
PdasResult pdas_solve(const ReducedProblem& problem, const ControlField& q_init, const PdasOptions& options = {});

}  // namespace dbc
