#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbc/manufactured.hpp"

namespace dbc::cli {

/// Bad or unknown configuration entry; the message names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  // [problem]
  std::string case_name = "example51";
  std::optional<double> lambda;
  std::optional<double> lower;
  std::optional<double> upper;
  ContactBoundary contact = ContactBoundary::all;

  // [study]
  std::vector<LevelSpec> levels = reference_levels();
  int jobs = 1;

  // [solve]
  LevelSpec solve_level{8, 6};

  // [solver]
  PdasOptions pdas;
  SlabSolverOptions slab;

  // [check]
  std::vector<std::string> checks{"gradient", "hessian", "adjoint", "coercivity"};
  unsigned seed = 1;
  LevelSpec check_level{2, 2};
  int directions = 20;
  int instances = 10;

  // [output]
  std::filesystem::path output = "out";

  /// Case with the [problem] overrides applied.
  ManufacturedCase manufactured_case() const;
};

Config parse_config(std::istream& in);
Config load_config(const std::filesystem::path& path);

/// "4x4, 8x6" -> {{4,4},{8,6}}; an empty string gives an empty list.
std::vector<LevelSpec> parse_levels(const std::string& text);

}  // namespace dbc::cli
