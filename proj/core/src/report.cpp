#include "dbc/report.hpp"

#include <array>
#include <charconv>
#include <ostream>

#include "json.hpp"

namespace dbc {

std::string format_g8(double value) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 8);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_g8(*v) : std::string(); }

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

nlohmann::json to_json(const KKTDiagnostics& d) {
  nlohmann::json j;
  j["converged"] = d.converged;
  j["stationarity"] = d.stationarity;
  j["complementarity"] = d.complementarity;
  j["infeasibility"] = d.infeasibility;
  j["active_lower"] = d.active_lower;
  j["active_upper"] = d.active_upper;
  j["outer_iterations"] = d.outer_iterations;
  j["scaling"] = d.scaling;
  j["cycles"] = d.cycles;
  j["cg_iterations"] = d.cg_iterations;
  j["objective"] = d.objective;
  auto& hist = j["history"] = nlohmann::json::array();
  for (const auto& it : d.history) {
    hist.push_back({{"iteration", it.iteration},
                    {"active_lower", it.active_lower},
                    {"active_upper", it.active_upper},
                    {"objective", it.objective},
                    {"stationarity", it.stationarity},
                    {"complementarity", it.complementarity},
                    {"infeasibility", it.infeasibility},
                    {"cg_iterations", it.cg_iterations}});
  }
  return j;
}

template <class Field>
void write_slab_snapshot(std::ostream& os, const Field& f) {
  const auto& mesh = *f.mesh();
  const auto& verts = mesh.space().vertices();
  os << "slab,t,node,x,y,value\n";
  for (int m = 1; m <= mesh.steps(); ++m) {
    const std::string t = format_g8(mesh.time().points()[m]);
    for (std::size_t v = 0; v < verts.size(); ++v) {
      os << m << ',' << t << ',' << v << ',' << format_g8(verts[v].x) << ',' << format_g8(verts[v].y) << ','
         << format_g8(f.nodal(m, static_cast<int>(v))) << '\n';
    }
  }
}

}  // namespace

void write_table_csv(std::ostream& os, const StudyReport& report) {
  os << "n,M,h,k,sigma,err_state,rate_state,err_adjoint,rate_adjoint,err_control,rate_control\n";
  for (const auto& l : report.levels) {
    os << l.n << ',' << l.steps << ',' << format_g8(l.h) << ',' << format_g8(l.k) << ',' << format_g8(l.sigma) << ','
       << format_g8(l.err_state) << ',' << opt(l.rate_state) << ',' << format_g8(l.err_adjoint) << ','
       << opt(l.rate_adjoint) << ',' << format_g8(l.err_control) << ',' << opt(l.rate_control) << '\n';
  }
}

std::string report_json(const StudyReport& report, int indent) {
  nlohmann::json j;
  j["case"] = report.case_name;
  j["lambda"] = report.lambda;
  j["lower"] = report.lower;
  j["upper"] = report.upper;
  j["complete"] = !report.failure.has_value();
  if (report.failure) j["failure"] = *report.failure;
  auto& levels = j["levels"] = nlohmann::json::array();
  for (const auto& l : report.levels) {
    levels.push_back({{"n", l.n},
                      {"M", l.steps},
                      {"h", l.h},
                      {"k", l.k},
                      {"sigma", l.sigma},
                      {"err_state", l.err_state},
                      {"err_adjoint", l.err_adjoint},
                      {"err_control", l.err_control},
                      {"rate_state_h", opt_json(l.rate_state)},
                      {"rate_adjoint_h", opt_json(l.rate_adjoint)},
                      {"rate_state_k", opt_json(l.rate_state_k)},
                      {"rate_adjoint_k", opt_json(l.rate_adjoint_k)},
                      {"rate_control_sigma", opt_json(l.rate_control)},
                      {"kkt", to_json(l.kkt)}});
  }
  return j.dump(indent);
}

std::string diagnostics_json(const KKTDiagnostics& diag, int indent) { return to_json(diag).dump(indent); }

void write_control_snapshot(std::ostream& os, const ControlField& q) {
  const auto& mesh = *q.mesh();
  const auto& verts = mesh.space().vertices();
  os << "level,t,node,x,y,value\n";
  for (int l = 1; l < mesh.steps(); ++l) {
    const std::string t = format_g8(mesh.time().points()[l]);
    for (std::size_t v = 0; v < verts.size(); ++v) {
      os << l << ',' << t << ',' << v << ',' << format_g8(verts[v].x) << ',' << format_g8(verts[v].y) << ','
         << format_g8(q.at(l, static_cast<int>(v))) << '\n';
    }
  }
}

void write_state_snapshot(std::ostream& os, const StateField& w) { write_slab_snapshot(os, w); }
void write_adjoint_snapshot(std::ostream& os, const AdjointField& phi) { write_slab_snapshot(os, phi); }

}  // namespace dbc
