#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

#include "commands.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("dbc");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("DBC_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::info);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dbc::cli;
  setup_logging();

  CLI::App app{"Dirichlet boundary control of the heat equation: studies, solves and checks"};
  app.require_subcommand(1);
  std::string config_path;
  int jobs = 0;
  auto* study = app.add_subcommand("study", "convergence study over a level list");
  study->add_option("--config", config_path, "config file")->required();
  study->add_option("--jobs", jobs, "levels solved concurrently")->check(CLI::PositiveNumber);
  auto* check = app.add_subcommand("check", "gradient, Hessian, adjoint and coercivity checks");
  check->add_option("--config", config_path, "config file")->required();
  auto* solve = app.add_subcommand("solve", "single level with solution snapshots");
  solve->add_option("--config", config_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? success : config_error;
  }

  try {
    Config config = load_config(config_path);
    if (jobs > 0) config.jobs = jobs;
    if (study->parsed()) return cmd_study(config, std::cout);
    if (check->parsed()) return cmd_check(config, std::cout);
    return cmd_solve(config, std::cout);
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return config_error;
  } catch (const std::invalid_argument& e) {
    spdlog::error("{}", e.what());
    return config_error;
  } catch (const dbc::NonConvergenceError& e) {
    spdlog::error("{}", e.what());
    return numerical_failure;
  } catch (const dbc::SolverError& e) {
    spdlog::error("{} (slab {}, residual {:.3e})", e.what(), e.slab(), e.residual());
    return numerical_failure;
  } catch (const dbc::CgBreakdown& e) {
    spdlog::error("{}", e.what());
    return numerical_failure;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return numerical_failure;
  }
}
