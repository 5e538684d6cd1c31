#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dbc::cli {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"problem", {"case", "lambda", "lower", "upper", "contact"}},
      {"study", {"levels", "jobs"}},
      {"solve", {"n", "steps"}},
      {"solver", {"tolerance", "max_outer", "scaling", "cg_tolerance", "cg_max_iterations", "direct_limit", "cycle_factor"}},
      {"check", {"suites", "seed", "n", "steps", "directions", "instances"}},
      {"output", {"directory"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  double out = 0.0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || end != v.data() + v.size())
    throw ConfigError("invalid number for key '" + key + "': '" + raw + "'");
  return out;
}

long to_integer(const std::string& key, const std::string& raw, long min_value) {
  const std::string v = trim(raw);
  long out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || end != v.data() + v.size())
    throw ConfigError("invalid integer for key '" + key + "': '" + raw + "'");
  if (out < min_value)
    throw ConfigError("key '" + key + "' must be >= " + std::to_string(min_value) + ", got " + v);
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {
    for (const auto& [section, body] : tree_) {
      if (body.empty() && !body.data().empty())
        throw ConfigError("key '" + section + "' must be inside a section");
      const auto it = schema().find(section);
      if (it == schema().end()) throw ConfigError("unknown section '[" + section + "]'");
      for (const auto& [key, value] : body)
        if (!it->second.count(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
    }
  }

  std::optional<std::string> text(const std::string& section, const std::string& key) const {
    const auto s = tree_.get_child_optional(section);
    if (!s) return std::nullopt;
    const auto v = s->get_child_optional(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return v->data();
  }

  void number(const std::string& section, const std::string& key, double& out) const {
    if (auto v = text(section, key)) out = to_double(section + "." + key, *v);
  }
  void number(const std::string& section, const std::string& key, std::optional<double>& out) const {
    if (auto v = text(section, key)) out = to_double(section + "." + key, *v);
  }
  template <class Int>
  void integer(const std::string& section, const std::string& key, Int& out, long min_value) const {
    if (auto v = text(section, key)) out = static_cast<Int>(to_integer(section + "." + key, *v, min_value));
  }

 private:
  const pt::ptree& tree_;
};

}  // namespace

std::vector<LevelSpec> parse_levels(const std::string& text) {
  std::vector<LevelSpec> out;
  for (const auto& item : split_list(text)) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw ConfigError("invalid entry for key 'study.levels': '" + item + "', expected NxM");
    LevelSpec l;
    l.n = static_cast<int>(to_integer("study.levels", item.substr(0, x), 1));
    l.steps = static_cast<int>(to_integer("study.levels", item.substr(x + 1), 1));
    out.push_back(l);
  }
  return out;
}

Config parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("malformed config at line " + std::to_string(e.line()) + ": " + e.message());
  }
  const Reader r(tree);
  Config c;

  if (auto v = r.text("problem", "case")) c.case_name = trim(*v);
  r.number("problem", "lambda", c.lambda);
  r.number("problem", "lower", c.lower);
  r.number("problem", "upper", c.upper);
  if (auto v = r.text("problem", "contact")) {
    const std::string s = trim(*v);
    if (s == "all") c.contact = ContactBoundary::all;
    else if (s == "bottom") c.contact = ContactBoundary::bottom;
    else throw ConfigError("invalid value for key 'problem.contact': '" + s + "', expected all or bottom");
  }
  if (c.lambda && !(*c.lambda > 0.0)) throw ConfigError("key 'problem.lambda' must be positive");

  if (auto v = r.text("study", "levels")) c.levels = parse_levels(*v);
  r.integer("study", "jobs", c.jobs, 1);

  r.integer("solve", "n", c.solve_level.n, 1);
  r.integer("solve", "steps", c.solve_level.steps, 1);

  r.number("solver", "tolerance", c.pdas.tolerance);
  if (!(c.pdas.tolerance > 0.0)) throw ConfigError("key 'solver.tolerance' must be positive");
  r.integer("solver", "max_outer", c.pdas.max_outer, 1);
  r.number("solver", "scaling", c.pdas.scaling);
  r.number("solver", "cg_tolerance", c.pdas.cg_tolerance);
  r.integer("solver", "cg_max_iterations", c.pdas.cg_max_iterations, 1);
  r.integer("solver", "direct_limit", c.slab.direct_limit, 0);
  r.number("solver", "cycle_factor", c.pdas.cycle_factor);
  if (!(c.pdas.cycle_factor > 1.0)) throw ConfigError("key 'solver.cycle_factor' must exceed 1");

  if (auto v = r.text("check", "suites")) {
    static const std::set<std::string> known{"gradient", "hessian", "adjoint", "coercivity"};
    c.checks = split_list(*v);
    for (const auto& s : c.checks)
      if (!known.count(s)) throw ConfigError("invalid entry for key 'check.suites': '" + s + "'");
  }
  r.integer("check", "seed", c.seed, 0);
  r.integer("check", "n", c.check_level.n, 1);
  r.integer("check", "steps", c.check_level.steps, 2);
  r.integer("check", "directions", c.directions, 1);
  r.integer("check", "instances", c.instances, 1);

  if (auto v = r.text("output", "directory")) c.output = trim(*v);
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  return parse_config(in);
}

ManufacturedCase Config::manufactured_case() const {
  ManufacturedCase mc;
  try {
    mc = make_case(case_name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("key 'problem.case': ") + e.what());
  }
  if (lambda) mc.lambda = *lambda;
  if (lower) mc.lower = *lower;
  if (upper) mc.upper = *upper;
  if (mc.lower > 0.0 || mc.upper < 0.0) throw ConfigError("bounds must satisfy problem.lower <= 0 <= problem.upper");
  mc.contact = contact;
  return mc;
}

}  // namespace dbc::cli
