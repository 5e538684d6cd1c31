#include "dbc/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "dbc/cg.hpp"

namespace dbc {

ReducedProblem::ReducedProblem(std::shared_ptr<const SlabSolver> solver, double lambda, BoundSet bounds,
                               const ProblemData& data, const PrismRule& rule)
    : solver_(std::move(solver)), lambda_(lambda), bounds_(std::move(bounds)) {
  if (!(lambda_ > 0.0)) throw std::invalid_argument("ReducedProblem: lambda must be positive");
  const Discretization& d = disc();

  const SpaceTimeFunction zero3 = [](double, double, double) { return 0.0; };
  const auto zero2 = [](double, double) { return 0.0; };
  state_data_ = make_state_data(d, data.source ? data.source : zero3,
                                data.initial ? data.initial : std::function<double(double, double)>(zero2), rule);

  target_loads_.reserve(static_cast<std::size_t>(d.steps()));
  for (int m = 1; m <= d.steps(); ++m) {
    if (data.target)
      target_loads_.push_back(assemble_hat_loads(d, data.target, m, rule));
    else
      target_loads_.push_back({Vector::Zero(d.num_nodes()), Vector::Zero(d.num_nodes())});
  }
  if (data.target) {
    const auto& ud = data.target;
    target_norm2_ = integrate(d, [&ud](double x, double y, double t) { return ud(x, y, t) * ud(x, y, t); }, rule);
  }

  shift_ = data.control_shift ? interpolate_control(mesh(), data.control_shift) : ControlField(mesh());
  diag_ = lambda_ * d.control_seminorm().diagonal();
}

StateField ReducedProblem::state(const ControlField& q) const { return solve_state(*solver_, state_data_, q); }

std::vector<Vector> ReducedProblem::tracking_loads(const StateField& w, const ControlField& q) const {
  const Discretization& d = disc();
  std::vector<Vector> loads;
  loads.reserve(static_cast<std::size_t>(d.steps()));
  for (int m = 1; m <= d.steps(); ++m) {
    const double k = d.step(m);
    const HatLoads& ud = target_loads_[static_cast<std::size_t>(m - 1)];
    loads.push_back(k * (d.mass_interior() * w.slab(m)) +
                    (0.5 * k) * (d.mass_rows() * (q.level(m - 1) + q.level(m))) - d.restrict(ud.left + ud.right));
  }
  return loads;
}

double ReducedProblem::tracking_objective(const StateField& w, const ControlField& q) const {
  const Discretization& d = disc();
  double quadratic = 0.0, linear = 0.0;
  for (int m = 1; m <= d.steps(); ++m) {
    const double k = d.step(m);
    const Vector a = q.level(m - 1), b = q.level(m);
    const Vector ma = d.mass() * a, mb = d.mass() * b;
    const Vector& wm = w.slab(m);
    const Vector ew = d.extend(wm);
    quadratic += 0.5 * k * wm.dot(d.mass_interior() * wm) + 0.5 * k * ew.dot(ma + mb) +
                 (k / 6.0) * (a.dot(ma) + a.dot(mb) + b.dot(mb));
    const HatLoads& ud = target_loads_[static_cast<std::size_t>(m - 1)];
    linear += ew.dot(ud.left + ud.right) + a.dot(ud.left) + b.dot(ud.right);
  }
  return quadratic - linear + 0.5 * target_norm2_;
}

double ReducedProblem::objective(const ControlField& q) const {
  const Vector diff = q.values() - shift_.values();
  return tracking_objective(state(q), q) + 0.5 * lambda_ * diff.dot(disc().control_seminorm() * diff);
}

Vector ReducedProblem::control_side(const StateField& w, const ControlField& q, const AdjointField& phi,
                                    bool with_target) const {
  const Discretization& d = disc();
  const int steps = d.steps();
  const int nodes = d.num_nodes();
  // per slab: M E w_m, M E phi_m, S E phi_m (index m, entry 0 unused)
  std::vector<Vector> mw(steps + 1), mphi(steps + 1), sphi(steps + 1);
  for (int m = 1; m <= steps; ++m) {
    mw[m] = d.mass_rows().transpose() * w.slab(m);
    mphi[m] = d.mass_rows().transpose() * phi.slab(m);
    sphi[m] = d.stiffness_rows().transpose() * phi.slab(m);
  }
  std::vector<Vector> mq(steps + 1);
  for (int l = 0; l <= steps; ++l) mq[l] = d.mass() * q.level(l);

  Vector out(q.values().size());
  for (int l = 1; l < steps; ++l) {
    const double kl = d.step(l), kr = d.step(l + 1);
    // -B(p, phi): coupling of the level-l basis with the adjoint
    Vector v = -(mphi[l] - mphi[l + 1]) - 0.5 * kl * sphi[l] - 0.5 * kr * sphi[l + 1];
    // (u, p)_I with u = w + q
    v += 0.5 * kl * mw[l] + kl * (mq[l - 1] / 6.0 + mq[l] / 3.0);
    v += 0.5 * kr * mw[l + 1] + kr * (mq[l] / 3.0 + mq[l + 1] / 6.0);
    if (with_target) {
      v -= target_loads_[static_cast<std::size_t>(l - 1)].right;
      v -= target_loads_[static_cast<std::size_t>(l)].left;
    }
    out.segment(ControlField::dof(l, 0, nodes), nodes) = v;
  }
  return out;
}

ReducedProblem::Evaluation ReducedProblem::evaluate(const ControlField& q) const {
  Evaluation e;
  e.state = state(q);
  e.adjoint = solve_adjoint(*solver_, tracking_loads(e.state, q));
  const Vector diff = q.values() - shift_.values();
  const Vector adiff = disc().control_seminorm() * diff;
  e.gradient = ControlField(mesh(), lambda_ * adiff + control_side(e.state, q, e.adjoint, true));
  e.objective = tracking_objective(e.state, q) + 0.5 * lambda_ * diff.dot(adiff);
  return e;
}

ControlField ReducedProblem::reduced_gradient(const ControlField& q) const { return evaluate(q).gradient; }

ControlField ReducedProblem::hessian_vec(const ControlField& dq) const {
  const Discretization& d = disc();
  const StateField s = solve_state_sensitivity(*solver_, dq);
  std::vector<Vector> loads;
  loads.reserve(static_cast<std::size_t>(d.steps()));
  for (int m = 1; m <= d.steps(); ++m) {
    const double k = d.step(m);
    loads.push_back(k * (d.mass_interior() * s.slab(m)) +
                    (0.5 * k) * (d.mass_rows() * (dq.level(m - 1) + dq.level(m))));
  }
  const AdjointField psi = solve_adjoint(*solver_, loads);
  return ControlField(mesh(), lambda_ * (d.control_seminorm() * dq.values()) + control_side(s, dq, psi, false));
}

std::vector<int> classify_active(const BoundSet& bounds, const ControlField& q, const ControlField& gradient,
                                 double scaling) {
  std::vector<int> active(bounds.constrained.size(), 0);
  for (std::size_t j = 0; j < bounds.constrained.size(); ++j) {
    const Eigen::Index i = bounds.constrained[j];
    const double trial = q.values()[i] - gradient.values()[i] / scaling;
    // strict inequalities: exact contact counts as inactive
    if (trial < bounds.lower)
      active[j] = -1;
    else if (trial > bounds.upper)
      active[j] = 1;
  }
  return active;
}

KKTDiagnostics kkt_residuals(const BoundSet& bounds, const ControlField& q, const ControlField& gradient,
                             const std::vector<int>& active) {
  KKTDiagnostics k;
  const Vector& g = gradient.values();
  const Vector& x = q.values();
  std::vector<char> fixed(static_cast<std::size_t>(x.size()), 0);
  for (std::size_t j = 0; j < bounds.constrained.size(); ++j) {
    const Eigen::Index i = bounds.constrained[j];
    const double mu = g[i];
    const double to_lower = x[i] - bounds.lower;
    const double to_upper = bounds.upper - x[i];
    k.infeasibility = std::max({k.infeasibility, -to_lower, -to_upper});
    // a positive multiplier needs contact with q_a, a negative one with q_b
    const double contact = std::max(0.0, std::min(std::abs(to_lower), std::max(mu, 0.0))) +
                           std::max(0.0, std::min(std::abs(to_upper), std::max(-mu, 0.0)));
    k.complementarity = std::max(k.complementarity, contact);
    if (active[j] == -1) {
      ++k.active_lower;
      k.complementarity = std::max(k.complementarity, -mu);
      fixed[static_cast<std::size_t>(i)] = 1;
    } else if (active[j] == 1) {
      ++k.active_upper;
      k.complementarity = std::max(k.complementarity, mu);
      fixed[static_cast<std::size_t>(i)] = 1;
    }
  }
  for (Eigen::Index i : bounds.pinned) {
    fixed[static_cast<std::size_t>(i)] = 1;
    k.infeasibility = std::max(k.infeasibility, std::abs(x[i]));
  }
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!fixed[static_cast<std::size_t>(i)]) k.stationarity = std::max(k.stationarity, std::abs(g[i]));
  return k;
}

PdasResult pdas_solve(const ReducedProblem& problem, const ControlField& q_init, const PdasOptions& options) {
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("pdas_solve: tolerance must be positive");
  if (!(options.cycle_factor > 1.0)) throw std::invalid_argument("pdas_solve: cycle_factor must exceed 1");
  const BoundSet& bounds = problem.bounds();
  double scaling = options.scaling > 0.0 ? options.scaling : problem.lambda();
  const double cg_tol = options.cg_tolerance > 0.0 ? options.cg_tolerance : std::min(1e-10, 1e-2 * options.tolerance);
  const MeshPtr& mesh = problem.mesh();

  ControlField q = project_onto_bounds(q_init, bounds);
  ReducedProblem::Evaluation eval = problem.evaluate(q);
  std::vector<int> previous;
  bool have_previous = false;
  std::vector<std::vector<int>> seen;
  int cycles = 0;
  KKTDiagnostics diag;
  int total_cg = 0;
  std::vector<PdasIteration> history;

  for (int outer = 0;; ++outer) {
    std::vector<int> active = classify_active(bounds, q, eval.gradient, scaling);
    // a set revisited after two or more steps is a cycle; damp the multiplier
    while (have_previous && active != previous &&
           std::find(seen.begin(), seen.end(), active) != seen.end()) {
      scaling *= options.cycle_factor;
      ++cycles;
      seen.clear();
      active = classify_active(bounds, q, eval.gradient, scaling);
    }
    seen.push_back(active);
    KKTDiagnostics current = kkt_residuals(bounds, q, eval.gradient, active);
    PdasIteration record{outer, current.active_lower, current.active_upper, eval.objective,
                         current.stationarity, current.complementarity, current.infeasibility, 0};

    const double residual = std::max({current.stationarity, current.complementarity, current.infeasibility});
    const bool stable = have_previous && active == previous;
    if (stable && residual < options.tolerance) {
      history.push_back(record);
      if (options.on_iteration) options.on_iteration(record);
      diag = current;
      diag.converged = true;
      break;
    }
    if (outer >= options.max_outer) {
      history.push_back(record);
      if (options.on_iteration) options.on_iteration(record);
      diag = current;
      diag.outer_iterations = outer;
      diag.scaling = scaling;
      diag.cycles = cycles;
      diag.cg_iterations = total_cg;
      diag.objective = eval.objective;
      diag.history = std::move(history);
      throw NonConvergenceError("PDAS did not converge within " + std::to_string(options.max_outer) +
                                    " outer iterations",
                                diag);
    }

    // Step d: fix active DOFs at their bounds, CG on the rest.
    const Eigen::Index n = q.values().size();
    Vector mask = Vector::Ones(n);
    Vector d = Vector::Zero(n);
    for (std::size_t j = 0; j < bounds.constrained.size(); ++j) {
      const Eigen::Index i = bounds.constrained[j];
      if (active[j] == 0) continue;
      mask[i] = 0.0;
      d[i] = (active[j] < 0 ? bounds.lower : bounds.upper) - q.values()[i];
    }
    for (Eigen::Index i : bounds.pinned) {
      mask[i] = 0.0;
      d[i] = -q.values()[i];
    }
    Vector rhs = -eval.gradient.values();
    if (d.squaredNorm() > 0.0) rhs -= problem.hessian_vec(ControlField(mesh, d)).values();
    rhs = rhs.cwiseProduct(mask);

    const Vector& diag_h = problem.preconditioner_diagonal();
    auto apply = [&](const Vector& v) {
      return Vector(problem.hessian_vec(ControlField(mesh, v.cwiseProduct(mask))).values().cwiseProduct(mask));
    };
    auto precondition = [&](const Vector& r) { return Vector(r.cwiseQuotient(diag_h).cwiseProduct(mask)); };
    Vector step = Vector::Zero(n);
    const CgResult cg = conjugate_gradient(apply, precondition, rhs, step, cg_tol, options.cg_max_iterations);
    total_cg += cg.iterations;
    record.cg_iterations = cg.iterations;
    history.push_back(record);
    if (options.on_iteration) options.on_iteration(record);

    q.values() += d + step;
    // active entries are assigned, not accumulated
    for (std::size_t j = 0; j < bounds.constrained.size(); ++j) {
      if (active[j] == 0) continue;
      q.values()[bounds.constrained[j]] = active[j] < 0 ? bounds.lower : bounds.upper;
    }
    for (Eigen::Index i : bounds.pinned) q.values()[i] = 0.0;
    eval = problem.evaluate(q);
    previous = active;
    have_previous = true;
  }

  diag.cg_iterations = total_cg;
  diag.objective = eval.objective;
  diag.scaling = scaling;
  diag.cycles = cycles;
  // the last record is the convergence test, not a step
  diag.outer_iterations = static_cast<int>(history.size()) - 1;
  diag.history = std::move(history);

  PdasResult result;
  result.multiplier = Vector(static_cast<Eigen::Index>(bounds.constrained.size()));
  for (std::size_t j = 0; j < bounds.constrained.size(); ++j)
    result.multiplier[static_cast<Eigen::Index>(j)] = eval.gradient.values()[bounds.constrained[j]];
  result.control = std::move(q);
  result.state = std::move(eval.state);
  result.adjoint = std::move(eval.adjoint);
  result.gradient = std::move(eval.gradient);
  result.diagnostics = std::move(diag);
  return result;
}

}  // namespace dbc
