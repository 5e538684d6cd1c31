#include <gtest/gtest.h>

#include <sstream>

#include "dbc/report.hpp"
#include "json.hpp"

using namespace dbc;

namespace {

StudyReport two_levels() {
  StudyReport r;
  r.case_name = "example51";
  r.lambda = 1e-3;
  r.upper = 0.8;
  for (int n : {4, 8}) {
    StudyLevel l;
    l.n = n;
    l.steps = n;
    l.h = 1.0 / n;
    l.k = 1.0 / n;
    l.sigma = std::hypot(l.h, l.k);
    l.err_state = 0.1 / n;
    l.err_adjoint = 0.01 / n;
    l.err_control = 1.0 / n;
    l.kkt.converged = true;
    l.kkt.outer_iterations = 3;
    r.levels.push_back(l);
  }
  r.compute_rates();
  return r;
}

}  // namespace

TEST(FormatG8, Precision) {
  EXPECT_EQ(format_g8(0.02610199123), "0.026101991");
  EXPECT_EQ(format_g8(1.0), "1");
  EXPECT_EQ(format_g8(1e-12), "1e-12");
  EXPECT_EQ(format_g8(123456789.0), "1.2345679e+08");
  EXPECT_EQ(format_g8(-0.5), "-0.5");
}

TEST(TableCsv, Layout) {
  std::ostringstream os;
  write_table_csv(os, two_levels());
  EXPECT_EQ(os.str(),
            "n,M,h,k,sigma,err_state,rate_state,err_adjoint,rate_adjoint,err_control,rate_control\n"
            "4,4,0.25,0.25,0.35355339,0.025,,0.0025,,0.25,\n"
            "8,8,0.125,0.125,0.1767767,0.0125,1,0.00125,1,0.125,1\n");
}

TEST(ReportJson, Contents) {
  const auto j = nlohmann::json::parse(report_json(two_levels()));
  EXPECT_EQ(j["case"], "example51");
  ASSERT_EQ(j["levels"].size(), 2u);
  EXPECT_TRUE(j["levels"][0]["rate_state"].is_null());
  EXPECT_DOUBLE_EQ(j["levels"][1]["rate_control_sigma"].get<double>(), 1.0);
  EXPECT_EQ(j["levels"][1]["kkt"]["outer_iterations"], 3);
}

TEST(Snapshots, RowCounts) {
  const auto mesh = make_space_time_mesh(8, 6);
  std::ostringstream c, s;
  write_control_snapshot(c, ControlField(mesh));
  write_state_snapshot(s, StateField(mesh));
  auto lines = [](const std::string& text) { return std::count(text.begin(), text.end(), '\n'); };
  EXPECT_EQ(lines(c.str()), 1 + 81 * 5);
  EXPECT_EQ(lines(s.str()), 1 + 81 * 6);
  EXPECT_EQ(c.str().substr(0, c.str().find('\n')), "level,t,node,x,y,value");
}
