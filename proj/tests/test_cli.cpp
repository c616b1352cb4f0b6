#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "volterra/io.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("volterra-cli-" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(VOLTERRA_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, SimulateWritesPath) {
  TempDir d("simulate");
  write(d.path / "run.ini", "[run]\nhorizon = 100\n[kernel]\ntype = null\n[forcing]\ntype = gaussian-iid\nsigma = 1\n");
  ASSERT_EQ(run("simulate --config " + (d.path / "run.ini").string() + " --out " + d.path.string()), 0);
  const auto cols = volterra::read_columns_file((d.path / "path.tsv").string());
  EXPECT_EQ(cols.rows.size(), 101u);
  // Null kernel: x equals H.
  for (std::size_t i = 1; i < cols.rows.size(); ++i) EXPECT_EQ(cols.rows[i][1], cols.rows[i][2]);
}

TEST(Cli, SeedOverrideChangesPathAndReplayMatches) {
  TempDir d("replay");
  write(d.path / "run.ini", "[run]\nhorizon = 300\n[forcing]\ntype = heavytail-iid\nalpha = 1.5\n");
  const auto a = d.path / "a", b = d.path / "b";
  ASSERT_EQ(run("simulate --config " + (d.path / "run.ini").string() + " --seed 1 --out " + a.string()), 0);
  ASSERT_EQ(run("simulate --config " + (d.path / "run.ini").string() + " --seed 2 --out " + b.string()), 0);
  EXPECT_NE(slurp(a / "path.tsv"), slurp(b / "path.tsv"));

  write(d.path / "replay.ini", "[run]\nhorizon = 300\n[forcing]\ntype = file\npath = " + (a / "path.tsv").string() + "\n");
  const auto c = d.path / "c";
  ASSERT_EQ(run("simulate --config " + (d.path / "replay.ini").string() + " --out " + c.string()), 0);
  const auto orig = volterra::read_columns_file((a / "path.tsv").string());
  const auto again = volterra::read_columns_file((c / "path.tsv").string());
  ASSERT_EQ(orig.rows.size(), again.rows.size());
  for (std::size_t i = 0; i < orig.rows.size(); ++i) EXPECT_EQ(orig.rows[i][2], again.rows[i][2]);
}

TEST(Cli, ConfigErrorsExitWithTwo) {
  TempDir d("errors");
  write(d.path / "bad.ini", "[run]\nhorizon = 10\nkernell = geometric\n");
  EXPECT_EQ(run("simulate --config " + (d.path / "bad.ini").string() + " --out " + d.path.string()), 2);
  EXPECT_EQ(run("simulate --permissive --config " + (d.path / "bad.ini").string() + " --out " + d.path.string()), 0);
  write(d.path / "rho.ini", "[kernel]\ntype = geometric\nrho = 1.5\n");
  EXPECT_EQ(run("simulate --config " + (d.path / "rho.ini").string()), 2);
}

TEST(Cli, DiagnoseWritesTracksAndSummary) {
  TempDir d("diagnose");
  write(d.path / "run.ini", "[run]\nhorizon = 2000\n[forcing]\ntype = monotone-power\nmu = 1.2\n");
  ASSERT_EQ(run("diagnose --config " + (d.path / "run.ini").string() + " --out " + d.path.string()), 0);
  EXPECT_TRUE(fs::exists(d.path / "tracks.tsv"));
  const auto summary = nlohmann::json::parse(slurp(d.path / "summary.json"));
  EXPECT_EQ(summary["horizon"], 2000);
  EXPECT_NEAR(summary["x_star_over_H_star"].get<double>(), 1.0, 0.05);
}

TEST(Cli, VerifyExitCodeFollowsVerdicts) {
  TempDir d("verify");
  write(d.path / "ok.ini", "[suite]\nscenarios = growth-up, bounded-a\n");
  ASSERT_EQ(run("verify --config " + (d.path / "ok.ini").string() + " --out " + d.path.string()), 0);
  const auto report = slurp(d.path / "report.jsonl");
  EXPECT_EQ(std::count(report.begin(), report.end(), '\n'), 2);

  write(d.path / "bad.ini", "[scenario strict-growth]\nbase = growth-up\ntolerance = 1e-9\n");
  EXPECT_EQ(run("verify --config " + (d.path / "bad.ini").string() + " --out " + d.path.string()), 1);
}

TEST(Cli, VerifyHonorsOutDirEnvironment) {
  TempDir d("env");
  const std::string cmd = "VOLTERRA_OUT_DIR=" + d.path.string() + " " + VOLTERRA_CLI_PATH +
                          " verify --scenario growth-up > /dev/null 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(d.path / "report.jsonl"));
}

TEST(Cli, SweepWritesOneReportPerPoint) {
  TempDir d("sweep");
  write(d.path / "s.ini", "[sweep]\nscenario = growth-up\nparameter = forcing.mu\nvalues = 1.1, 1.3\n");
  ASSERT_EQ(run("sweep --config " + (d.path / "s.ini").string() + " --out " + d.path.string()), 0);
  EXPECT_TRUE(fs::exists(d.path / "sweep-0.jsonl"));
  EXPECT_TRUE(fs::exists(d.path / "sweep-1.jsonl"));
  EXPECT_FALSE(fs::exists(d.path / "sweep-2.jsonl"));
}

TEST(Cli, UsageErrors) {
  EXPECT_NE(run(""), 0);
  EXPECT_NE(run("simulate --strict --permissive"), 0);
  EXPECT_NE(run("explode"), 0);
}
