#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "dbc/report.hpp"

namespace dbc::cli {

namespace fs = std::filesystem;

namespace {

StudyOptions study_options(const Config& c) {
  StudyOptions o;
  o.pdas = c.pdas;
  o.slab = c.slab;
  o.jobs = c.jobs;
  o.pdas.on_iteration = [](const PdasIteration& it) {
    spdlog::debug("  outer {}: active lower {} upper {}, j = {:.10e}, residuals {:.2e}/{:.2e}/{:.2e}, cg {}",
                  it.iteration, it.active_lower, it.active_upper, it.objective, it.stationarity,
                  it.complementarity, it.infeasibility, it.cg_iterations);
  };
  o.on_level = [](const StudyLevel& l) {
    spdlog::info("level n={} M={}: state {:.8g}, adjoint {:.8g}, control {:.8g}, outer {}, cg {}", l.n, l.steps,
                 l.err_state, l.err_adjoint, l.err_control, l.kkt.outer_iterations, l.kkt.cg_iterations);
  };
  return o;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  os << text;
}

std::string table_text(const StudyReport& r) {
  std::ostringstream os;
  write_table_csv(os, r);
  return os.str();
}

struct Tiny {
  MeshPtr mesh;
  std::shared_ptr<SlabSolver> solver;
  std::unique_ptr<ReducedProblem> problem;
  explicit Tiny(const Config& c) {
    const auto mc = c.manufactured_case();
    mesh = make_space_time_mesh(c.check_level.n, c.check_level.steps, mc.final_time);
    solver = std::make_shared<SlabSolver>(std::make_shared<const Discretization>(mesh), c.slab);
    problem = std::make_unique<ReducedProblem>(solver, mc.lambda, make_bound_set(*mesh, mc.lower, mc.upper, mc.contact),
                                               mc.problem_data());
  }
};

Vector gaussian(Eigen::Index size, std::mt19937& rng) {
  std::normal_distribution<double> d;
  Vector v(size);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

CheckOutcome check_gradient(const Config& c) {
  Tiny t(c);
  std::mt19937 rng(c.seed);
  const ControlField q(t.mesh, gaussian(t.problem->shift().values().size(), rng));
  const Vector g = t.problem->reduced_gradient(q).values();
  const double eps = 1e-4;
  double worst = 0.0;
  for (int i = 0; i < c.directions; ++i) {
    const Vector d = gaussian(g.size(), rng);
    const double fd = (t.problem->objective(ControlField(t.mesh, q.values() + eps * d)) -
                       t.problem->objective(ControlField(t.mesh, q.values() - eps * d))) /
                      (2 * eps);
    worst = std::max(worst, std::abs(fd - g.dot(d)) / std::abs(g.dot(d)));
  }
  return {"gradient", worst, 1e-6, worst < 1e-6};
}

CheckOutcome check_hessian(const Config& c) {
  Tiny t(c);
  std::mt19937 rng(c.seed + 1);
  const auto& a = t.problem->disc().control_seminorm();
  double asym = 0.0;
  bool coercive = true;
  for (int i = 0; i < c.instances; ++i) {
    const ControlField d1(t.mesh, gaussian(a.rows(), rng)), d2(t.mesh, gaussian(a.rows(), rng));
    const Vector h1 = t.problem->hessian_vec(d1).values();
    const Vector h2 = t.problem->hessian_vec(d2).values();
    asym = std::max(asym, std::abs(d2.values().dot(h1) - d1.values().dot(h2)));
    coercive = coercive && d1.values().dot(h1) >= t.problem->lambda() * d1.values().dot(a * d1.values());
  }
  return {"hessian", asym, 1e-10, asym < 1e-10 && coercive};
}

CheckOutcome check_adjoint(const Config& c) {
  Tiny t(c);
  std::mt19937 rng(c.seed + 2);
  double worst = 0.0;
  const auto& disc = t.problem->disc();
  for (int i = 0; i < c.instances; ++i) {
    const ControlField dq(t.mesh, gaussian(t.problem->shift().values().size(), rng));
    std::vector<Vector> g;
    for (int m = 1; m <= disc.steps(); ++m) g.push_back(gaussian(disc.num_interior(), rng));
    worst = std::max(worst, adjoint_identity_check(t.problem->solver(), dq, g));
  }
  return {"adjoint", worst, 1e-10, worst < 1e-10};
}

CheckOutcome check_coercivity(const Config& c) {
  Tiny t(c);
  std::mt19937 rng(c.seed + 3);
  const auto& disc = t.problem->disc();
  // smallest B(v,v) - sum k |grad v|^2 relative to B(v,v); must stay >= 0
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 10 * c.instances; ++i) {
    StateField v(t.mesh);
    for (int m = 1; m <= disc.steps(); ++m) v.slab(m) = gaussian(disc.num_interior(), rng);
    const double b = state_form(disc, v, v);
    margin = std::min(margin, (b - state_energy(disc, v)) / b);
  }
  return {"coercivity", margin, -1e-14, margin >= -1e-14};
}

int cmd_study(const Config& c, std::ostream& out) {
  const auto mc = c.manufactured_case();
  if (c.levels.empty()) throw ConfigError("levels must be nonempty");
  spdlog::info("study '{}' on {} levels, lambda {}, bounds [{}, {}]", mc.name, c.levels.size(), mc.lambda, mc.lower,
               mc.upper);
  const StudyReport report = run_study(c.levels, mc, study_options(c));
  fs::create_directories(c.output);
  const std::string table = table_text(report);
  write_file(c.output / "table.csv", table);
  write_file(c.output / "report.json", report_json(report) + "\n");
  out << table;
  if (report.failure) {
    spdlog::error("study stopped: {}", *report.failure);
    return numerical_failure;
  }
  return success;
}

int cmd_solve(const Config& c, std::ostream& out) {
  const auto mc = c.manufactured_case();
  auto options = study_options(c);
  options.pdas.on_iteration = [](const PdasIteration& it) {
    spdlog::info("outer {}: active lower {} upper {}, j = {:.10e}, cg {}", it.iteration, it.active_lower,
                 it.active_upper, it.objective, it.cg_iterations);
  };
  fs::create_directories(c.output / "snapshots");
  LevelSolution sol;
  try {
    sol = solve_level(c.solve_level, mc, options);
  } catch (const NonConvergenceError& e) {
    write_file(c.output / "diagnostics.json", diagnostics_json(e.diagnostics()) + "\n");
    spdlog::error("{}", e.what());
    return numerical_failure;
  }
  auto snapshot = [&](const char* name, auto&& writer) {
    std::ofstream os(c.output / "snapshots" / name, std::ios::binary);
    writer(os);
  };
  snapshot("control.csv", [&](std::ostream& os) { write_control_snapshot(os, sol.result.control); });
  snapshot("state.csv", [&](std::ostream& os) { write_state_snapshot(os, sol.result.state); });
  snapshot("adjoint.csv", [&](std::ostream& os) { write_adjoint_snapshot(os, sol.result.adjoint); });
  write_file(c.output / "diagnostics.json", diagnostics_json(sol.result.diagnostics) + "\n");
  const auto& s = sol.summary;
  out << "n=" << s.n << " M=" << s.steps << " err_state=" << format_g8(s.err_state)
      << " err_adjoint=" << format_g8(s.err_adjoint) << " err_control=" << format_g8(s.err_control)
      << " active_lower=" << s.kkt.active_lower << " active_upper=" << s.kkt.active_upper << "\n";
  return success;
}

int cmd_check(const Config& c, std::ostream& out) {
  bool all = true;
  for (const auto& name : c.checks) {
    CheckOutcome r;
    if (name == "gradient") r = check_gradient(c);
    else if (name == "hessian") r = check_hessian(c);
    else if (name == "adjoint") r = check_adjoint(c);
    else r = check_coercivity(c);
    out << (r.pass ? "PASS " : "FAIL ") << r.name << " measured " << format_g8(r.value)
        << (r.name == "coercivity" ? " (>= " : " (< ") << format_g8(r.limit) << ")\n";
    all = all && r.pass;
  }
  return all ? success : numerical_failure;
}

}  // namespace dbc::cli
