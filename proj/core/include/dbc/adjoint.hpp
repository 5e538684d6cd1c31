#pragma once

#include <vector>

#include "dbc/forward.hpp"

namespace dbc {

/// Backward sweep for B(v, phi) = sum_m (G_m, v_m) with phi_{M+1} = 0:
///   (M + k_m S) phi_m = M phi_{m+1} + G_m,  m = M..1.
/// `tracking[m - 1]` holds G_m on the interior nodes.
AdjointField solve_adjoint(const SlabSolver& solver, const std::vector<Vector>& tracking);

/// Adjoint for the misfit u - u_d with u = w + q, tracking loads by quadrature.
AdjointField solve_adjoint(const SlabSolver& solver, const SpaceTimeFunction& u_d, const StateField& w,
                           const ControlField& q, const PrismRule& rule = default_prism_rule());

/// sum_m B(dq, phi)|_{I_m}: the coupling functional of dq paired with an adjoint.
double coupling_pairing(const Discretization& disc, const ControlField& dq, const AdjointField& phi);

/// Duality defect |(g, s(dq))_I + B(dq, phi(g))|, where s is the state
/// sensitivity of dq and phi the adjoint driven by g. Since s solves
/// B(s, v) = -B(dq, v), the two pairings cancel exactly in exact arithmetic.
double adjoint_identity_check(const SlabSolver& solver, const ControlField& dq,
                              const std::vector<Vector>& tracking);

}  // namespace dbc
