#pragma once

#include <iosfwd>
#include <optional>

#include "config.hpp"

namespace dbc::cli {

/// 2 covers solver nonconvergence and failed checks.
enum ExitCode : int { success = 0, config_error = 1, numerical_failure = 2 };

int cmd_study(const Config& config, std::ostream& out);
int cmd_check(const Config& config, std::ostream& out);
int cmd_solve(const Config& config, std::ostream& out);

/// One measured check; `pass` compares `value` against `limit`.
struct CheckOutcome {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

CheckOutcome check_gradient(const Config& config);
CheckOutcome check_hessian(const Config& config);
CheckOutcome check_adjoint(const Config& config);
CheckOutcome check_coercivity(const Config& config);

}  // namespace dbc::cli
