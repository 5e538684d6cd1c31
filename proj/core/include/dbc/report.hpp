#pragma once

#include <iosfwd>
#include <string>

#include "dbc/manufactured.hpp"

namespace dbc {

/// One row per level, '.' decimal, 8 significant digits. Missing rates are
/// written as empty fields.
void write_table_csv(std::ostream& os, const StudyReport& report);

/// Report including the k-rates and the KKT diagnostics of every level.
std::string report_json(const StudyReport& report, int indent = 2);

std::string diagnostics_json(const KKTDiagnostics& diag, int indent = 2);

/// Snapshot tables keyed by global vertex number.
/// control: "level,t,node,x,y,value" for levels 1..M-1.
void write_control_snapshot(std::ostream& os, const ControlField& q);
/// "slab,t,node,x,y,value" for slabs 1..M, boundary nodes included as 0.
void write_state_snapshot(std::ostream& os, const StateField& w);
void write_adjoint_snapshot(std::ostream& os, const AdjointField& phi);

/// printf("%.8g") in the C locale.
std::string format_g8(double value);

}  // namespace dbc
