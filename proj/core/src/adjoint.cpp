#include "dbc/adjoint.hpp"

#include <cmath>
#include <stdexcept>

namespace dbc {

AdjointField solve_adjoint(const SlabSolver& solver, const std::vector<Vector>& tracking) {
  const Discretization& disc = solver.disc();
  if (static_cast<int>(tracking.size()) != disc.steps())
    throw std::invalid_argument("solve_adjoint: one tracking load per slab required");
  AdjointField phi(disc.mesh_ptr());
  Vector future = Vector::Zero(disc.num_interior());  // M phi_{m+1}
  for (int m = disc.steps(); m >= 1; --m) {
    phi.slab(m) = solver.solve(m, future + tracking[static_cast<std::size_t>(m - 1)]);
    future = disc.mass_interior() * phi.slab(m);
  }
  return phi;
}

AdjointField solve_adjoint(const SlabSolver& solver, const SpaceTimeFunction& u_d, const StateField& w,
                           const ControlField& q, const PrismRule& rule) {
  const Discretization& disc = solver.disc();
  std::vector<Vector> tracking;
  tracking.reserve(static_cast<std::size_t>(disc.steps()));
  for (int m = 1; m <= disc.steps(); ++m) tracking.push_back(assemble_tracking(disc, u_d, w, q, m, rule));
  return solve_adjoint(solver, tracking);
}

double coupling_pairing(const Discretization& disc, const ControlField& dq, const AdjointField& phi) {
  double total = 0.0;
  for (int m = 1; m <= disc.steps(); ++m) total += assemble_coupling(disc, dq, m).dot(phi.slab(m));
  return total;
}

double adjoint_identity_check(const SlabSolver& solver, const ControlField& dq,
                              const std::vector<Vector>& tracking) {
  const StateField s = solve_state_sensitivity(solver, dq);
  const AdjointField phi = solve_adjoint(solver, tracking);
  double state_side = 0.0;
  for (int m = 1; m <= s.steps(); ++m) state_side += tracking[static_cast<std::size_t>(m - 1)].dot(s.slab(m));
  return std::abs(state_side + coupling_pairing(solver.disc(), dq, phi));
}

}  // namespace dbc
