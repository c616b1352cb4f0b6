// Acceptance run: one pass/fail line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "volterra/volterra.hpp"

using namespace volterra;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

RealSeq x_from_one(const Path& p) { return RealSeq{1, std::vector<double>(p.x.values.begin() + 1, p.x.values.end())}; }

TheoremCheck run_named(const std::string& name) { return run_scenario(*find_default_scenario(name)); }

// 1. Auto-mode paths against the full reference sum on random configurations.
Outcome engine_equivalence() {
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    KernelSpec k;
    switch (trial % 3) {
      case 0: k = KernelSpec::geometric(4.0 * u(gen) - 2.0, 0.05 + 0.9 * u(gen)); break;
      case 1: k = KernelSpec::polynomial(4.0 * u(gen) - 2.0, 1.5 + 3.0 * u(gen)); break;
      default: {
        std::vector<double> c(1 + static_cast<std::size_t>(u(gen) * 20));
        for (auto& v : c) v = 2.0 * u(gen) - 1.0;
        k = KernelSpec::finite(c);
      }
    }
    const auto f = NonlinearitySpec::signed_power(0.1 + 0.8 * u(gen));
    const auto N = static_cast<std::int64_t>(100 + u(gen) * 1900);
    const std::uint64_t seed = gen();
    ForcingSpec spec;
    switch ((trial / 3) % 4) {
      case 0: spec = ForcingSpec(GaussianIid{0.5 + 5.0 * u(gen)}, seed); break;
      case 1: spec = ForcingSpec(HeavyTailIid{1.0 + 2.0 * u(gen)}, seed); break;
      case 2: spec = ForcingSpec(MonotonePower{0.5 + u(gen), u(gen) < 0.5 ? 1.0 : -1.0}, seed); break;
      default: spec = ForcingSpec(BoundedOscillation{1.0 + 3.0 * u(gen)}, seed);
    }
    SimConfig cfg;
    cfg.kernel = k;
    cfg.f = f;
    cfg.forcing = generate(spec, N);
    cfg.xi = 4.0 * u(gen) - 2.0;
    cfg.horizon = N;
    cfg.mode = SolverMode::Auto;
    const Path a = simulate(cfg);
    cfg.mode = SolverMode::Reference;
    const Path r = simulate(cfg);
    for (std::int64_t n = 0; n <= N; ++n)
      worst = std::max(worst, std::abs(a.x[n] - r.x[n]) / std::max(1.0, std::abs(r.x[n])));
  }
  return {worst <= 1e-9, "200 configs, max relative difference " + fmt("%.3g", worst)};
}

// 2. Pathwise inequalities on every seed path of every shipped scenario.
Outcome pathwise_suite() {
  std::int64_t paths = 0, violations = 0, checked = 0;
  std::string first;
  for (const auto& sc : default_suite()) {
    for (auto seed : sc.seeds) {
      Path p;
      try {
        p = simulate_scenario(sc, seed);
      } catch (const OverflowError&) {
        continue;
      }
      ++paths;
      const auto report = check_pathwise_bounds(p, sc.kernel, sc.f, {0.5, 0.1, 0.01});
      for (const auto& c : report.checks) {
        checked += c.checked;
        violations += c.violations;
        if (c.violations && first.empty()) first = sc.name + ":" + c.name;
      }
    }
  }
  std::string d = std::to_string(paths) + " paths, " + std::to_string(checked) + " index checks, " +
                  std::to_string(violations) + " violations";
  if (!first.empty()) d += " (first in " + first + ")";
  return {violations == 0 && paths > 0, d};
}

// 3. Max ratio and the four argmax-coupling ratios under heavy tails.
Outcome growth_maxima() {
  const auto mr = run_named("maxratio");
  const auto ac = run_named("argmax-coupling");
  const bool params = mr.seeds.size() == 5 && mr.horizons == std::vector<std::int64_t>{1000, 10000, 100000};
  std::string d = "median |x*/H* - 1| per horizon";
  for (double v : mr.statistics) d += " " + fmt("%.4g", v);
  d += "; coupling";
  for (double v : ac.statistics) d += " " + fmt("%.4g", v);
  return {params && mr.verdict == Verdict::Pass && ac.verdict == Verdict::Pass && mr.statistics.back() <= 0.05 &&
              ac.statistics.back() <= 0.05,
          d};
}

// 4. Polynomially growing forcing.
Outcome growth_power() {
  const std::int64_t N = 100000;
  SimConfig cfg;
  cfg.kernel = KernelSpec::geometric(1.0, 0.5);
  cfg.f = NonlinearitySpec::signed_power(0.5);
  cfg.forcing = generate(ForcingSpec(MonotonePower{1.2, 1.0}, 0), N);
  cfg.horizon = N;
  const Path p = simulate(cfg);
  const double err = std::abs(p.x[N] / p.h[N] - 1.0);
  return {err <= 0.01, "|x(N)/H(N) - 1| = " + fmt("%.3g", err) + " at N = 1e5"};
}

// 5. Exponential growth modulated by a period-7 pattern.
Outcome periodic_growth() {
  const std::vector<double> pattern{1.0, 1.5, 2.0, 1.25, 1.75, 1.1, 1.9};
  const double a = 0.05;
  const std::int64_t N = 2000;
  SimConfig cfg;
  cfg.kernel = KernelSpec::geometric(1.0, 0.5);
  cfg.f = NonlinearitySpec::signed_power(0.5);
  cfg.forcing = generate(ForcingSpec(PeriodicExponential{a, pattern}, 0), N);
  cfg.horizon = N;
  const Path p = simulate(cfg);
  double sup = 0.0;
  for (std::int64_t n = N - 199; n <= N; ++n)
    sup = std::max(sup, std::abs(p.x[n] / std::exp(a * static_cast<double>(n)) - pattern[static_cast<std::size_t>(n % 7)]));
  return {sup <= 1e-3, "final-200 sup residual " + fmt("%.3g", sup)};
}

// 6. Gaussian forcing against sqrt(2 log n).
Outcome gaussian_limsup() {
  auto sc = *find_default_scenario("limsup-rho");
  std::vector<double> rho;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Path p = simulate(scenario_sim_config(sc, seed, 1000000));
    rho.push_back(tail_sup_ratio(x_from_one(p), ScalerSpec::sqrt_log(), kDefaultTailFraction));
  }
  const double m = median(rho);
  return {m >= 0.85 && m <= 1.1, "20 seeds at N = 1e6, median rho-hat " + fmt("%.4f", m) + ", kernel " +
                                     sc.kernel.canonical()};
}

// 7. Constructed alternating example, both regimes.
Outcome constructed_example() {
  const std::int64_t N = 100000;
  const auto k = KernelSpec::geometric(1.0, 0.5);
  const auto f = NonlinearitySpec::signed_power(0.5);
  auto run = [&](double mu_minus, Path& path, ForcingSequence& H) {
    const ConstructedAlternating c{1.0, mu_minus, 0.5, k, SolverMode::Auto};
    H = generate(ForcingSpec(c, 0), N);
    SimConfig cfg;
    cfg.kernel = k;
    cfg.f = f;
    cfg.forcing = H;
    cfg.xi = *H.initial_state;
    cfg.horizon = N;
    path = simulate(cfg);
    return path.x.values == constructed_target(c, N).values;
  };

  Path p;
  ForcingSequence H;
  const bool exact = run(0.7, p, H);
  const auto l2 = estimate_lambda2(H.values, f);
  const double xm = running_signed_max(x_from_one(p), Side::Minus).values[N];
  const double ratio = xm / std::pow(static_cast<double>(N), 0.7);

  Path p2;
  ForcingSequence H2;
  const bool exact2 = run(0.2, p2, H2);
  const auto l2b = estimate_lambda2(H2.values, f);
  const double lam2 = k.even_index_sum();
  const double xm2 = running_signed_max(x_from_one(p2), Side::Minus).values[N];
  const double hm2 = running_signed_max(H2.values, Side::Minus).values[N];
  const double half = k.l1() / lam2 + 0.1;
  const double r2 = xm2 / hm2;

  const bool ok = exact && exact2 && l2.regime == LimitRegime::PlusInfinity && std::abs(ratio - 1.0) <= 0.05 &&
                  std::abs(l2b.final / lam2 - 1.0) <= 0.1 && std::abs(r2 - 1.0) <= half;
  std::string d = std::string("bit-exact ") + (exact && exact2 ? "yes" : "no") + "; mu_-=0.7: lambda2 regime " +
                  std::string(to_string(l2.regime)) + ", x*_-/N^0.7 = " + fmt("%.4f", ratio) +
                  "; mu_-=0.2: lambda2-hat " + fmt("%.4f", l2b.final) + ", x*_-/H*_- = " + fmt("%.4f", r2);
  return {ok, d};
}

// 8. phi-moment dichotomies.
Outcome phi_moments() {
  const auto fin = run_named("ergodic-phi"), div = run_named("ergodic-phi-divergent");
  const auto p1 = run_named("pth-moment"), p25 = run_named("pth-moment-divergent");
  auto extra = [](const TheoremCheck& c, const std::string& key) {
    for (const auto& [k, v] : c.extras)
      if (k == key) return v;
    return std::nan("");
  };
  const double AH = extra(p1, "A_H");
  const bool ok = fin.verdict == Verdict::Pass && div.verdict == Verdict::Pass && p1.verdict == Verdict::Pass &&
                  p25.verdict == Verdict::Pass && std::abs(AH / 2.0 - 1.0) <= 0.1;
  std::string d = "exp(0.3 H^2): " + std::string(to_string(fin.verdict)) + ", exp(0.7 H^2) divergent: " +
                  std::string(to_string(div.verdict)) + ", p=1 A_H(N) = " + fmt("%.4f", AH) + " (" +
                  std::string(to_string(p1.verdict)) + "), p=2.5 divergent: " + std::string(to_string(p25.verdict));
  return {ok, d};
}

// 9. Log-exponent of heavy-tailed paths.
Outcome heavytail_exponent() {
  Scenario sc = *find_default_scenario("pth-moment");
  const std::int64_t N = 1000000;
  std::vector<double> e;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Path p = simulate(scenario_sim_config(sc, seed, N));
    e.push_back(log_exponent_sup(x_from_one(p), N / 10));
  }
  const double m = median(e);
  return {std::abs(m - 0.5) <= 0.1, "5 seeds at N = 1e6, median final-decade sup log|x|/log n = " + fmt("%.4f", m)};
}

// 10. Repeated default-suite runs give identical reports.
Outcome reproducibility() {
  auto once = [] {
    std::ostringstream out;
    write_report(out, run_suite(default_suite()));
    return out.str();
  };
  const std::string a = once(), b = once();
  return {!a.empty() && a == b, std::to_string(a.size()) + " bytes, identical " + (a == b ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // <= 0 means no limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "engine oracle equivalence", 30, engine_equivalence},
      {2, "pathwise inequality suite", 60, pathwise_suite},
      {3, "growth of maxima under heavy tails", 60, growth_maxima},
      {4, "polynomial growth", 10, growth_power},
      {5, "periodic exponential growth", 1, periodic_growth},
      {6, "gaussian limsup", 300, gaussian_limsup},
      {7, "constructed alternating example", 30, constructed_example},
      {8, "phi-moment dichotomies", 180, phi_moments},
      {9, "heavy-tail log exponent", 180, heavytail_exponent},
      {10, "reproducible reports", 0, reproducibility},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_seconds <= 0 || secs <= c.limit_seconds;
    const bool ok = o.ok && in_time;
    failures += !ok;
    std::printf("criterion %2d %s: %s | %s | %.2f s%s\n", c.id, ok ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                in_time ? "" : " (over time limit)");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures ? 1 : 0;
}
