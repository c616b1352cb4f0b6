#include <gtest/gtest.h>

#include "volterra/pathwise.hpp"
#include "volterra/theorems.hpp"

using namespace volterra;

TEST(Pathwise, ShippedScenariosHoldAtModerateHorizon) {
  for (auto sc : default_suite()) {
    const std::int64_t N = std::min<std::int64_t>(sc.max_horizon(), 20000);
    const auto cfg = scenario_sim_config(sc, sc.seeds.front(), N);
    Path p;
    try {
      p = simulate(cfg);
    } catch (const OverflowError&) {
      continue;
    }
    const auto report = check_pathwise_bounds(p, sc.kernel, sc.f);
    EXPECT_EQ(report.total_violations(), 0) << sc.name;
    for (const auto& c : report.checks) EXPECT_GT(c.checked, 0) << sc.name << " " << c.name;
  }
}

TEST(Pathwise, UpperEstimateOnlyWhenContractive) {
  const auto k = KernelSpec::geometric(1.0, 0.5);  // |k|_1 = 2
  SimConfig cfg;
  cfg.kernel = k;
  cfg.forcing = ForcingSequence::from_values({1.0, -1.0, 2.0});
  cfg.horizon = 3;
  const auto report = check_pathwise_bounds(simulate(cfg), k, cfg.f, {0.5, 0.1});
  int upper = 0;
  for (const auto& c : report.checks)
    if (c.name == "x-star-upper-estimate") {
      ++upper;
      EXPECT_LT(c.eps * k.l1(), 1.0);
    }
  EXPECT_EQ(upper, 2);  // eps = 0.1 and the added 1/(2|k|_1)
}

TEST(Pathwise, DetectsCorruptedPath) {
  const auto k = KernelSpec::geometric(1.0, 0.5);
  SimConfig cfg;
  cfg.kernel = k;
  cfg.forcing = ForcingSequence::from_values(std::vector<double>(200, 1.0));
  cfg.horizon = 200;
  auto p = simulate(cfg);
  p.x.values[150] = 1e6;
  const auto report = check_pathwise_bounds(p, k, cfg.f);
  EXPECT_GT(report.total_violations(), 0);
  bool found = false;
  for (const auto& c : report.checks)
    if (c.violations > 0 && c.first_violation == 150) found = true;
  EXPECT_TRUE(found);
}
