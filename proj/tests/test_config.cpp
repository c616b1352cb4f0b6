#include <gtest/gtest.h>

#include "volterra/config.hpp"

using namespace volterra;

namespace {

std::vector<std::string> problems_of(const std::string& text, bool strict = true) {
  try {
    parse_config(text, strict);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
  for (const auto& p : problems)
    if (p.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(Config, MinimalSimulateConfig) {
  const auto cfg = parse_config(
      "[run]\nhorizon = 100\n[kernel]\ntype = null\n[forcing]\ntype = gaussian-iid\nsigma = 1\n");
  EXPECT_EQ(cfg.horizon(), 100);
  EXPECT_TRUE(cfg.run.kernel.is_null());
  EXPECT_EQ(cfg.run.forcing.type_name(), "gaussian-iid");
  EXPECT_TRUE(cfg.warnings.empty());
}

TEST(Config, FullModelSections) {
  const auto cfg = parse_config(R"(
# comment
[run]
horizon = 500
xi = 2.5
mode = reference
seed = 17
[kernel]
type = polynomial
c = 0.5
beta = 3
[nonlinearity]
type = signed-power
alpha = 0.3
[forcing]
type = periodic-exponential
a = 0.05
pattern = [1, 2, 1.5]
[diagnostics]
tail_fraction = 0.5
scaler.type = power
scaler.p = 0.6
weight.type = gaussian-exp
weight.a = 0.3
)");
  EXPECT_EQ(cfg.run.xi, 2.5);
  EXPECT_EQ(cfg.run.mode, SolverMode::Reference);
  EXPECT_EQ(cfg.run.seeds, (std::vector<std::uint64_t>{17}));
  EXPECT_EQ(cfg.run.kernel.canonical(), KernelSpec::polynomial(0.5, 3.0).canonical());
  EXPECT_EQ(cfg.run.f.power_exponent(), 0.3);
  EXPECT_EQ(cfg.diagnostics.tail_fraction, 0.5);
  EXPECT_EQ(cfg.diagnostics.scaler.canonical(), ScalerSpec::power(0.6).canonical());
  EXPECT_EQ(cfg.diagnostics.weight.canonical(), ConvexWeightSpec::gaussian_exp(0.3).canonical());
}

TEST(Config, UnknownKeyIsNamed) {
  const auto p = problems_of("[run]\nhorizon = 10\nkernell = geometric\n");
  ASSERT_EQ(p.size(), 1u);
  EXPECT_TRUE(mentions(p, "kernell"));
  EXPECT_TRUE(mentions(p, "line 3"));
  EXPECT_TRUE(mentions(problems_of("[kernell]\ntype = null\n"), "kernell"));
}

TEST(Config, PermissiveDowngradesUnknownKeysToWarnings) {
  const auto cfg = parse_config("[run]\nhorizon = 10\nkernell = geometric\n", false);
  ASSERT_EQ(cfg.warnings.size(), 1u);
  EXPECT_NE(cfg.warnings[0].find("kernell"), std::string::npos);
}

TEST(Config, InvariantViolationIsReported) {
  const auto p = problems_of("[kernel]\ntype = geometric\nrho = 1.5\n");
  ASSERT_EQ(p.size(), 1u);
  EXPECT_TRUE(mentions(p, "line 2"));
  EXPECT_TRUE(mentions(p, "kernel"));
}

TEST(Config, CollectsAllProblems) {
  const auto p = problems_of(
      "[run]\nhorizon = abc\nmode = fast\n[forcing]\ntype = heavytail-iid\nalpha = -1\n[nonlinearity]\nalpha = 2\n"
      "[mystery]\nx = 1\n");
  EXPECT_GE(p.size(), 5u);
  EXPECT_TRUE(mentions(p, "horizon"));
  EXPECT_TRUE(mentions(p, "mystery"));
  EXPECT_TRUE(mentions(p, "heavytail"));
}

TEST(Config, SyntaxErrors) {
  EXPECT_TRUE(mentions(problems_of("horizon = 3\n"), "before any section"));
  EXPECT_TRUE(mentions(problems_of("[run]\nhorizon\n"), "key = value"));
  EXPECT_TRUE(mentions(problems_of("[run]\nhorizon = 1\nhorizon = 2\n"), "duplicate"));
  EXPECT_TRUE(mentions(problems_of("[run\n"), "malformed"));
}

TEST(Config, ScenarioSectionsOverrideDefaults) {
  const auto cfg = parse_config(R"(
[scenario fast-maxratio]
base = maxratio
horizons = 100, 1000
seeds = 1, 2
tolerance = 0.2
nonlinearity.alpha = 0.4
kernel.rho = 0.25
[suite]
scenarios = fast-maxratio, growth-up
)");
  ASSERT_EQ(cfg.suite.size(), 2u);
  const auto& s = cfg.suite[0];
  EXPECT_EQ(s.name, "fast-maxratio");
  EXPECT_EQ(s.theorem, "maxratio");
  EXPECT_EQ(s.horizons, (std::vector<std::int64_t>{100, 1000}));
  EXPECT_EQ(s.seeds, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(s.f.power_exponent(), 0.4);
  EXPECT_EQ(s.kernel.canonical(), KernelSpec::geometric(1.0, 0.25).canonical());
  EXPECT_EQ(s.forcing.type_name(), "heavytail-iid");
  EXPECT_EQ(cfg.suite[1].name, "growth-up");
}

TEST(Config, ScenarioErrors) {
  EXPECT_TRUE(mentions(problems_of("[scenario x]\nbase = nope\n"), "nope"));
  EXPECT_TRUE(mentions(problems_of("[scenario x]\nbase = maxratio\nkernel.rhoo = 1\n"), "kernel.rhoo"));
  EXPECT_TRUE(mentions(problems_of("[scenario x]\nbase = maxratio\nhorizons = 10, 5\n"), "increasing"));
  EXPECT_TRUE(mentions(problems_of("[suite]\nscenarios = missing\n"), "missing"));
}

TEST(Config, DefaultSuiteKeyword) {
  const auto cfg = parse_config("[suite]\nscenarios = default\n");
  EXPECT_EQ(cfg.suite.size(), default_suite().size());
}

TEST(Config, SweepExpandsGrid) {
  const auto cfg = parse_config("[sweep]\nscenario = growth-up\nparameter = forcing.mu\nvalues = 1.1, 1.2, 1.5\n");
  const auto points = expand_sweep(cfg);
  ASSERT_EQ(points.size(), 3u);
  EXPECT_EQ(points[2].name, "growth-up@forcing.mu=1.5");
  EXPECT_NE(points[0].fingerprint(), points[1].fingerprint());
  EXPECT_TRUE(mentions(problems_of("[sweep]\nscenario = growth-up\nparameter = forcing.mu\nvalues = 1, -2\n"), "-2"));
}

TEST(Config, ForcingFileAndConstructed) {
  const auto f = parse_config("[forcing]\ntype = file\npath = /tmp/h.tsv\n");
  EXPECT_EQ(f.forcing_file, std::optional<std::string>("/tmp/h.tsv"));
  const auto c = parse_config(
      "[kernel]\ntype = geometric\nc = 1\nrho = 0.5\n[forcing]\ntype = constructed-alternating\nmu_plus = 1\n"
      "mu_minus = 0.2\nalpha = 0.5\n");
  const auto* ca = std::get_if<ConstructedAlternating>(&c.run.forcing.variant());
  ASSERT_NE(ca, nullptr);
  EXPECT_EQ(ca->mu_minus, 0.2);
  EXPECT_EQ(ca->kernel.canonical(), KernelSpec::geometric(1.0, 0.5).canonical());
}

TEST(Config, EmptyTextGivesDefaults) {
  const auto cfg = parse_config("");
  EXPECT_TRUE(cfg.suite.empty());
  EXPECT_FALSE(cfg.sweep.has_value());
  EXPECT_GE(cfg.horizon(), 1);
}
