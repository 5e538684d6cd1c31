#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dbc/cg.hpp"
#include "dbc/optimizer.hpp"

namespace dbc {

using GradientFunction = std::function<std::array<double, 2>(double, double, double)>;

/// Problem with known optimal state, adjoint and control.
struct ManufacturedCase {
  std::string name;
  double lambda = 1.0;
  double lower = 0.0;
  double upper = 0.0;
  double final_time = 1.0;
  ContactBoundary contact = ContactBoundary::all;

  SpaceTimeFunction state;
  GradientFunction state_gradient;
  SpaceTimeFunction state_dt;
  SpaceTimeFunction adjoint;
  GradientFunction adjoint_gradient;
  SpaceTimeFunction adjoint_dt;
  SpaceTimeFunction control;
  GradientFunction control_gradient;
  SpaceTimeFunction control_dt;

  SpaceTimeFunction source;         // f = d_t u - Laplace u
  SpaceTimeFunction target;         // u_d = u + d_t phi + Laplace phi
  SpaceTimeFunction control_shift;  // q_d = q
  std::function<double(double, double)> initial;

  ProblemData problem_data() const;
};

/// Unit square, T = 1, u = q = x e^y (1-x)(1-y) t(1-t),
/// phi = (x^2-x^3)(y^2-y^3) t(1-t), lambda = 1e-3, q_a = 0, q_b = 0.8.
ManufacturedCase example51();

std::vector<std::string> available_cases();
/// Throws std::invalid_argument listing the available cases.
ManufacturedCase make_case(const std::string& name);

/// ||grad(u - (w + q))||_I.
double energy_error_state(const GradientFunction& exact, const StateField& w, const ControlField& q,
                          const PrismRule& rule = default_prism_rule());
/// ||grad(phi - phi_kh)||_I.
double energy_error_adjoint(const GradientFunction& exact, const AdjointField& phi,
                            const PrismRule& rule = default_prism_rule());
/// |q - q_sigma|_{1, Omega x I}.
double control_error(const GradientFunction& exact_gradient, const SpaceTimeFunction& exact_dt,
                     const ControlField& q, const PrismRule& rule = default_prism_rule());

/// log(e_l / e_{l-1}) / log(mu_l / mu_{l-1}); entry 0 is empty.
std::vector<std::optional<double>> eoc(const std::vector<double>& errors, const std::vector<double>& params);

struct LevelSpec {
  int n = 0;
  int steps = 0;
};

/// The refinement sequence of the reference convergence tables.
std::vector<LevelSpec> reference_levels();

struct StudyLevel {
  int n = 0;
  int steps = 0;
  double h = 0.0;
  double k = 0.0;
  double sigma = 0.0;
  double err_state = 0.0;
  double err_adjoint = 0.0;
  double err_control = 0.0;
  std::optional<double> rate_state;         // w.r.t. h
  std::optional<double> rate_adjoint;       // w.r.t. h
  std::optional<double> rate_state_k;       // w.r.t. k
  std::optional<double> rate_adjoint_k;     // w.r.t. k
  std::optional<double> rate_control;       // w.r.t. sigma
  KKTDiagnostics kkt;
};

struct StudyReport {
  std::string case_name;
  double lambda = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<StudyLevel> levels;
  /// Set when a level failed; levels holds the completed prefix.
  std::optional<std::string> failure;
  bool nonconvergence = false;

  /// Recompute every rate column from the stored errors.
  void compute_rates();
};

struct StudyOptions {
  PdasOptions pdas;
  SlabSolverOptions slab;
  PrismRule rule = default_prism_rule();
  int jobs = 1;
  std::function<void(const StudyLevel&)> on_level;
};

/// Full solution on one level together with its errors.
struct LevelSolution {
  MeshPtr mesh;
  PdasResult result;
  StudyLevel summary;
};

LevelSolution solve_level(const LevelSpec& level, const ManufacturedCase& mc, const StudyOptions& options);

/// Solves every level and fills errors and rates. A failing level stops the
/// study; the report then carries the completed levels and the failure.
StudyReport run_study(const std::vector<LevelSpec>& levels, const ManufacturedCase& mc,
                      const StudyOptions& options = {});

}  // namespace dbc
