#include <sstream>

#include <gtest/gtest.h>

#include "volterra/io.hpp"

using namespace volterra;

namespace {

Path sample_path() {
  SimConfig cfg;
  cfg.kernel = KernelSpec::geometric(1.0, 0.5);
  cfg.forcing = generate(ForcingSpec(HeavyTailIid{1.5}, 3), 500);
  cfg.xi = 0.1;
  cfg.horizon = 500;
  return simulate(cfg);
}

}  // namespace

TEST(Columns, PathRoundTripsExactly) {
  const Path p = sample_path();
  std::stringstream ss;
  write_path(ss, p);
  const std::string text = ss.str();
  EXPECT_EQ(text.rfind("# volterra " + std::string(kToolVersion) + "\n", 0), 0u);
  EXPECT_NE(text.find("# fingerprint: " + p.fingerprint), std::string::npos);
  EXPECT_NE(text.find("n\tH\tx\tS_prev\n"), std::string::npos);

  const Columns cols = read_columns(ss);
  EXPECT_EQ(cols.meta.at("kind"), "path");
  ASSERT_EQ(cols.rows.size(), 501u);
  EXPECT_TRUE(std::isnan(cols.rows[0][1]));
  EXPECT_TRUE(std::isnan(cols.rows[0][3]));
  for (std::int64_t n = 0; n <= 500; ++n) ASSERT_EQ(cols.rows[static_cast<std::size_t>(n)][2], p.x[n]);
  EXPECT_EQ(cols.rows[10][3], p.s[9]);
}

TEST(Columns, ReplayReproducesPath) {
  const Path p = sample_path();
  std::stringstream ss;
  write_path(ss, p);
  const auto H = read_forcing(read_columns(ss));
  SimConfig cfg;
  cfg.kernel = KernelSpec::geometric(1.0, 0.5);
  cfg.forcing = H;
  cfg.xi = *H.initial_state;
  cfg.horizon = H.size();
  EXPECT_EQ(simulate(cfg).x.values, p.x.values);
}

TEST(Columns, RejectsMalformedInput) {
  std::stringstream bad("n\tH\n1\t2\t3\n");
  EXPECT_THROW(read_columns(bad), ArgumentError);
  std::stringstream gap("n\tH\n1\t2\n3\t4\n");
  EXPECT_THROW(read_forcing(read_columns(gap)), ArgumentError);
  std::stringstream word("n\tH\n1\tabc\n");
  EXPECT_THROW(read_columns(word), ArgumentError);
}

TEST(Report, JsonLinesRecordPerCheck) {
  TheoremCheck c;
  c.scenario = "demo";
  c.theorem = "maxratio";
  c.fingerprint = "abc";
  c.horizons = {10, 100};
  c.seeds = {1};
  c.statistic = "x*/H* - 1";
  c.statistics = {0.5, NAN};
  c.tolerance = 0.05;
  c.verdict = Verdict::Inconclusive;
  c.extras = {{"lambda", INFINITY}};
  SuiteReport r{{c, c}};
  std::stringstream ss;
  write_report(ss, r);
  const auto records = read_report(ss);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0]["verdict"], "inconclusive");
  EXPECT_EQ(records[0]["tool_version"], kToolVersion);
  EXPECT_EQ(records[0]["statistics"][1], "nan");
  EXPECT_EQ(records[0]["extras"]["lambda"], "inf");
  EXPECT_EQ(records[0]["suite_fingerprint"], records[1]["suite_fingerprint"]);
}

TEST(Report, TableListsEveryScenario) {
  TheoremCheck a, b;
  a.scenario = "first";
  a.verdict = Verdict::Pass;
  b.scenario = "second";
  b.verdict = Verdict::Fail;
  std::stringstream ss;
  write_table(ss, SuiteReport{{a, b}});
  const auto text = ss.str();
  EXPECT_NE(text.find("first"), std::string::npos);
  EXPECT_NE(text.find("second"), std::string::npos);
  EXPECT_NE(text.find("1 pass, 1 fail, 0 inconclusive"), std::string::npos);
}

TEST(Diagnose, SummaryAndTracks) {
  const Path p = sample_path();
  const auto d = diagnose(p, NonlinearitySpec::signed_power(0.5), DiagnosticsOptions{});
  EXPECT_EQ(d.tracks.rows.size(), 500u);
  EXPECT_EQ(d.summary["horizon"], 500);
  EXPECT_EQ(d.summary["fingerprint"], p.fingerprint);
  EXPECT_TRUE(d.summary.contains("lambda"));
  EXPECT_TRUE(d.summary.contains("A_x"));
  const auto ix = d.tracks.index_of("x_star");
  EXPECT_EQ(d.tracks.rows.back()[ix], d.summary["x_star"].get<double>());
}
