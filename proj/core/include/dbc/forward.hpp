#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "dbc/assembly.hpp"
#include "dbc/spaces.hpp"

namespace dbc {

/// Raised when a linear solve fails; carries the slab and residual.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int slab, double residual)
      : std::runtime_error(what), slab_(slab), residual_(residual) {}
  int slab() const { return slab_; }
  double residual() const { return residual_; }

 private:
  int slab_;
  double residual_;
};

struct SlabSolverOptions {
  /// Interior dimension below which a sparse LDL^T factorization is used;
  /// larger systems fall back to Jacobi-preconditioned CG.
  int direct_limit = 20000;
  double cg_tolerance = 1e-12;
  int cg_max_iterations = 10000;
};

/// Solves (M + k_m S) x = b on the interior nodes. One factorization per
/// distinct step length, built up front and shared by every sweep.
class SlabSolver {
 public:
  explicit SlabSolver(DiscretizationPtr disc, SlabSolverOptions options = {});
  ~SlabSolver();
  SlabSolver(SlabSolver&&) noexcept;
  SlabSolver& operator=(SlabSolver&&) noexcept;

  const Discretization& disc() const { return *disc_; }
  const DiscretizationPtr& disc_ptr() const { return disc_; }
  bool uses_direct() const;

  Vector solve(int m, const Vector& rhs) const;

 private:
  struct Impl;
  DiscretizationPtr disc_;
  std::unique_ptr<Impl> impl_;
};

/// Data of the state equation on the interior nodes: the initial load
/// (u0, phi_i) and the source loads (f, phi_i)_{I_m}.
struct StateData {
  Vector initial_load;
  std::vector<Vector> source;  // one per slab, index m - 1
};

StateData zero_state_data(const Discretization& disc);

/// Precompute the state data for the given f and u0.
StateData make_state_data(const Discretization& disc, const SpaceTimeFunction& f,
                          const std::function<double(double, double)>& u0,
                          const PrismRule& rule = default_prism_rule());

/// Forward dG(0) sweep: (M + k_m S) w_m = M w_{m-1} + F_m - B(q, phi_i)|_{I_m},
/// with M w_0 = (u0, phi_i). The full state is u = w + q.
StateField solve_state(const SlabSolver& solver, const StateData& data, const ControlField& q);

/// Linearized sweep: f = 0, u0 = 0, control dq.
StateField solve_state_sensitivity(const SlabSolver& solver, const ControlField& dq);

/// Discrete bilinear form B(w, v) for two piecewise-constant states:
///   sum_m (w_m - w_{m-1}, v_m) + k_m (grad w_m, grad v_m),  w_0 = 0.
double state_form(const Discretization& disc, const StateField& w, const StateField& v);

/// sum_m k_m (grad v_m, grad v_m).
double state_energy(const Discretization& disc, const StateField& v);

}  // namespace dbc
