#include "dbc/manufactured.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

namespace dbc {

ProblemData ManufacturedCase::problem_data() const {
  return ProblemData{source, initial, target, control_shift};
}

ManufacturedCase example51() {
  // u = X(x) Y(y) T(t) with X = x(1-x), Y = e^y (1-y), T = t(1-t)
  // phi = P(x) P(y) T(t) with P(s) = s^2 - s^3
  struct F {
    static double X(double x) { return x * (1.0 - x); }
    static double dX(double x) { return 1.0 - 2.0 * x; }
    static double Y(double y) { return std::exp(y) * (1.0 - y); }
    static double dY(double y) { return -y * std::exp(y); }
    static double ddY(double y) { return -(1.0 + y) * std::exp(y); }
    static double T(double t) { return t * (1.0 - t); }
    static double dT(double t) { return 1.0 - 2.0 * t; }
    static double P(double s) { return s * s - s * s * s; }
    static double dP(double s) { return 2.0 * s - 3.0 * s * s; }
    static double ddP(double s) { return 2.0 - 6.0 * s; }
  };

  ManufacturedCase c;
  c.name = "example51";
  c.lambda = 1e-3;
  c.lower = 0.0;
  c.upper = 0.8;
  c.final_time = 1.0;

  c.state = [](double x, double y, double t) { return F::X(x) * F::Y(y) * F::T(t); };
  c.state_gradient = [](double x, double y, double t) {
    return std::array<double, 2>{F::dX(x) * F::Y(y) * F::T(t), F::X(x) * F::dY(y) * F::T(t)};
  };
  c.state_dt = [](double x, double y, double t) { return F::X(x) * F::Y(y) * F::dT(t); };
  c.control = c.state;
  c.control_gradient = c.state_gradient;
  c.control_dt = c.state_dt;

  c.adjoint = [](double x, double y, double t) { return F::P(x) * F::P(y) * F::T(t); };
  c.adjoint_gradient = [](double x, double y, double t) {
    return std::array<double, 2>{F::dP(x) * F::P(y) * F::T(t), F::P(x) * F::dP(y) * F::T(t)};
  };
  c.adjoint_dt = [](double x, double y, double t) { return F::P(x) * F::P(y) * F::dT(t); };

  c.source = [](double x, double y, double t) {
    const double laplace = (-2.0 * F::Y(y) + F::X(x) * F::ddY(y)) * F::T(t);
    return F::X(x) * F::Y(y) * F::dT(t) - laplace;
  };
  c.target = [](double x, double y, double t) {
    const double u = F::X(x) * F::Y(y) * F::T(t);
    const double dt_phi = F::P(x) * F::P(y) * F::dT(t);
    const double laplace_phi = (F::ddP(x) * F::P(y) + F::P(x) * F::ddP(y)) * F::T(t);
    return u + dt_phi + laplace_phi;
  };
  c.control_shift = c.control;
  c.initial = [](double, double) { return 0.0; };
  return c;
}

std::vector<std::string> available_cases() { return {"example51"}; }

ManufacturedCase make_case(const std::string& name) {
  if (name == "example51") return example51();
  std::string list;
  for (const auto& n : available_cases()) list += (list.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown case '" + name + "'; available cases: " + list);
}

namespace {

Point2 to_physical(const Triangulation& tri, std::size_t t, const std::array<double, 3>& bary) {
  const auto& nodes = tri.triangles()[t];
  Point2 p;
  for (int a = 0; a < 3; ++a) {
    p.x += bary[a] * tri.vertices()[nodes[a]].x;
    p.y += bary[a] * tri.vertices()[nodes[a]].y;
  }
  return p;
}

/// Gradient of the P1 function with the given vertex values on triangle t.
Point2 p1_gradient(const std::array<Point2, 3>& grads, double v0, double v1, double v2) {
  return {v0 * grads[0].x + v1 * grads[1].x + v2 * grads[2].x, v0 * grads[0].y + v1 * grads[1].y + v2 * grads[2].y};
}

/// sqrt(sum over prisms of the integral of |exact - discrete|^2), where the
/// discrete value on prism (t, m) at time fraction s is given by `discrete`.
template <class Discrete, class Exact>
double prism_l2(const SpaceTimeMesh& mesh, const PrismRule& rule, Discrete&& discrete, Exact&& exact) {
  const auto& tri = mesh.space();
  const auto& time = mesh.time();
  double total = 0.0;
  for (int m = 1; m <= mesh.steps(); ++m) {
    const double t0 = time.points()[m - 1];
    const double k = time.step(m);
    for (std::size_t t = 0; t < tri.num_triangles(); ++t) {
      const double area = tri.signed_area(t);
      const auto grads = tri.barycentric_gradients(t);
      for (std::size_t qs = 0; qs < rule.space.points.size(); ++qs) {
        const Point2 p = to_physical(tri, t, rule.space.points[qs]);
        for (std::size_t qt = 0; qt < rule.time.points.size(); ++qt) {
          const double s = rule.time.points[qt];
          const double w = area * rule.space.weights[qs] * k * rule.time.weights[qt];
          total += w * exact(p.x, p.y, t0 + s * k, discrete(grads, t, m, s));
        }
      }
    }
  }
  return std::sqrt(total);
}

}  // namespace

double energy_error_state(const GradientFunction& exact, const StateField& w, const ControlField& q,
                          const PrismRule& rule) {
  const SpaceTimeMesh& mesh = *w.mesh();
  const auto& tris = mesh.space().triangles();
  auto discrete = [&](const std::array<Point2, 3>& grads, std::size_t t, int m, double s) {
    const auto& v = tris[t];
    auto val = [&](int a) {
      return w.nodal(m, v[a]) + (1.0 - s) * q.at(m - 1, v[a]) + s * q.at(m, v[a]);
    };
    return p1_gradient(grads, val(0), val(1), val(2));
  };
  auto err = [&](double x, double y, double t, const Point2& g) {
    const auto e = exact(x, y, t);
    return (e[0] - g.x) * (e[0] - g.x) + (e[1] - g.y) * (e[1] - g.y);
  };
  return prism_l2(mesh, rule, discrete, err);
}

double energy_error_adjoint(const GradientFunction& exact, const AdjointField& phi, const PrismRule& rule) {
  const SpaceTimeMesh& mesh = *phi.mesh();
  const auto& tris = mesh.space().triangles();
  auto discrete = [&](const std::array<Point2, 3>& grads, std::size_t t, int m, double) {
    const auto& v = tris[t];
    return p1_gradient(grads, phi.nodal(m, v[0]), phi.nodal(m, v[1]), phi.nodal(m, v[2]));
  };
  auto err = [&](double x, double y, double t, const Point2& g) {
    const auto e = exact(x, y, t);
    return (e[0] - g.x) * (e[0] - g.x) + (e[1] - g.y) * (e[1] - g.y);
  };
  return prism_l2(mesh, rule, discrete, err);
}

double control_error(const GradientFunction& exact_gradient, const SpaceTimeFunction& exact_dt,
                     const ControlField& q, const PrismRule& rule) {
  const SpaceTimeMesh& mesh = *q.mesh();
  const auto& tri = mesh.space();
  const auto& time = mesh.time();
  double total = 0.0;
  for (int m = 1; m <= mesh.steps(); ++m) {
    const double t0 = time.points()[m - 1];
    const double k = time.step(m);
    for (std::size_t t = 0; t < tri.num_triangles(); ++t) {
      const auto& v = tri.triangles()[t];
      const double area = tri.signed_area(t);
      const auto grads = tri.barycentric_gradients(t);
      const std::array<double, 3> a{q.at(m - 1, v[0]), q.at(m - 1, v[1]), q.at(m - 1, v[2])};
      const std::array<double, 3> b{q.at(m, v[0]), q.at(m, v[1]), q.at(m, v[2])};
      const Point2 ga = p1_gradient(grads, a[0], a[1], a[2]);
      const Point2 gb = p1_gradient(grads, b[0], b[1], b[2]);
      for (std::size_t qs = 0; qs < rule.space.points.size(); ++qs) {
        const auto& bary = rule.space.points[qs];
        const Point2 p = to_physical(tri, t, bary);
        double dt = 0.0;
        for (int i = 0; i < 3; ++i) dt += bary[i] * (b[i] - a[i]) / k;
        for (std::size_t qt = 0; qt < rule.time.points.size(); ++qt) {
          const double s = rule.time.points[qt];
          const double tt = t0 + s * k;
          const double w = area * rule.space.weights[qs] * k * rule.time.weights[qt];
          const auto eg = exact_gradient(p.x, p.y, tt);
          const double gx = (1.0 - s) * ga.x + s * gb.x;
          const double gy = (1.0 - s) * ga.y + s * gb.y;
          const double et = exact_dt(p.x, p.y, tt) - dt;
          total += w * ((eg[0] - gx) * (eg[0] - gx) + (eg[1] - gy) * (eg[1] - gy) + et * et);
        }
      }
    }
  }
  return std::sqrt(total);
}

std::vector<std::optional<double>> eoc(const std::vector<double>& errors, const std::vector<double>& params) {
  if (errors.size() != params.size()) throw std::invalid_argument("eoc: size mismatch");
  std::vector<std::optional<double>> rates(errors.size());
  for (std::size_t l = 1; l < errors.size(); ++l)
    rates[l] = std::log(errors[l] / errors[l - 1]) / std::log(params[l] / params[l - 1]);
  return rates;
}

std::vector<LevelSpec> reference_levels() { return {{4, 4}, {8, 6}, {16, 12}, {32, 23}, {64, 46}}; }

void StudyReport::compute_rates() {
  std::vector<double> es, ea, ec, h, k, sigma;
  for (const auto& l : levels) {
    es.push_back(l.err_state);
    ea.push_back(l.err_adjoint);
    ec.push_back(l.err_control);
    h.push_back(l.h);
    k.push_back(l.k);
    sigma.push_back(l.sigma);
  }
  const auto rs = eoc(es, h), ra = eoc(ea, h), rsk = eoc(es, k), rak = eoc(ea, k), rc = eoc(ec, sigma);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    levels[i].rate_state = rs[i];
    levels[i].rate_adjoint = ra[i];
    levels[i].rate_state_k = rsk[i];
    levels[i].rate_adjoint_k = rak[i];
    levels[i].rate_control = rc[i];
  }
}

LevelSolution solve_level(const LevelSpec& level, const ManufacturedCase& mc, const StudyOptions& options) {
  LevelSolution out;
  out.mesh = make_space_time_mesh(level.n, level.steps, mc.final_time);
  auto disc = std::make_shared<const Discretization>(out.mesh);
  auto solver = std::make_shared<const SlabSolver>(disc, options.slab);
  ReducedProblem problem(solver, mc.lambda, make_bound_set(*out.mesh, mc.lower, mc.upper, mc.contact), mc.problem_data(),
                         options.rule);
  out.result = pdas_solve(problem, ControlField(out.mesh), options.pdas);

  StudyLevel& s = out.summary;
  s.n = level.n;
  s.steps = level.steps;
  s.h = out.mesh->h();
  s.k = out.mesh->k();
  s.sigma = out.mesh->sigma();
  s.err_state = energy_error_state(mc.state_gradient, out.result.state, out.result.control, options.rule);
  s.err_adjoint = energy_error_adjoint(mc.adjoint_gradient, out.result.adjoint, options.rule);
  s.err_control = control_error(mc.control_gradient, mc.control_dt, out.result.control, options.rule);
  s.kkt = out.result.diagnostics;
  return out;
}

StudyReport run_study(const std::vector<LevelSpec>& levels, const ManufacturedCase& mc, const StudyOptions& options) {
  if (levels.empty()) throw std::invalid_argument("levels must be nonempty");
  StudyReport report;
  report.case_name = mc.name;
  report.lambda = mc.lambda;
  report.lower = mc.lower;
  report.upper = mc.upper;

  auto run_one = [&](const LevelSpec& spec) { return solve_level(spec, mc, options).summary; };

  const std::size_t jobs = static_cast<std::size_t>(std::max(1, options.jobs));
  for (std::size_t start = 0; start < levels.size(); start += jobs) {
    const std::size_t stop = std::min(levels.size(), start + jobs);
    std::vector<std::future<StudyLevel>> batch;
    for (std::size_t i = start; i < stop; ++i)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, run_one, levels[i]));
    for (auto& f : batch) {
      try {
        StudyLevel level = f.get();
        if (!report.failure) {
          report.levels.push_back(level);
          if (options.on_level) options.on_level(level);
        }
      } catch (const NonConvergenceError& e) {
        if (!report.failure) report.failure = e.what();
        report.nonconvergence = true;
      } catch (const SolverError& e) {
        if (!report.failure) report.failure = e.what();
        report.nonconvergence = true;
      } catch (const CgBreakdown& e) {
        if (!report.failure) report.failure = e.what();
        report.nonconvergence = true;
      }
    }
    if (report.failure) break;
  }
  report.compute_rates();
  return report;
}

}  // namespace dbc
