// Command-line front end: simulate, diagnose, verify and sweep.
//
// Exit codes: 0 success, 1 a verify verdict failed, 2 bad configuration or
// usage, 3 runtime error such as an overflow.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "volterra/volterra.hpp"

namespace fs = std::filesystem;
using namespace volterra;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> horizon;
  std::string out;
  std::optional<double> tail_fraction;
  bool permissive = false;
  std::vector<std::string> scenarios;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig load(const Options& opt, const std::string& subcommand) {
  RunConfig cfg = parse_config(opt.config.empty() ? std::string() : read_file(opt.config), !opt.permissive);
  cfg.subcommand = subcommand;
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
  cfg.seed_override = opt.seed;
  cfg.horizon_override = opt.horizon;
  if (opt.tail_fraction) {
    if (!(*opt.tail_fraction > 0.0 && *opt.tail_fraction <= 1.0))
      throw ConfigError({"--tail-fraction must lie in (0,1]"});
    cfg.diagnostics.tail_fraction = *opt.tail_fraction;
    cfg.tail_fraction_override = opt.tail_fraction;
  }
  if (!opt.out.empty()) cfg.out_dir = opt.out;
  if (cfg.out_dir.empty()) {
    const char* env = std::getenv("VOLTERRA_OUT_DIR");
    cfg.out_dir = env && *env ? env : ".";
  }
  return cfg;
}

fs::path out_file(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return fs::path(cfg.out_dir) / name;
}

Path run_model(const RunConfig& cfg) {
  SimConfig sim;
  sim.kernel = cfg.run.kernel;
  sim.f = cfg.run.f;
  sim.horizon = cfg.horizon();
  sim.mode = cfg.run.mode;
  sim.overflow_limit = cfg.run.overflow_limit;
  if (cfg.forcing_file) {
    ForcingSequence seq = read_forcing(read_columns_file(*cfg.forcing_file));
    if (seq.size() < sim.horizon) {
      if (cfg.horizon_override)
        throw ArgumentError("forcing file holds " + std::to_string(seq.size()) + " values, horizon is " +
                            std::to_string(sim.horizon));
      sim.horizon = seq.size();
    }
    sim.xi = seq.initial_state.value_or(cfg.run.xi);
    sim.forcing = std::move(seq);
  } else {
    const std::uint64_t seed = cfg.seed_override.value_or(cfg.run.seeds.empty() ? 0 : cfg.run.seeds.front());
    sim.forcing = generate(cfg.run.forcing.with_seed(seed), sim.horizon, sim.overflow_limit);
    sim.xi = sim.forcing.initial_state.value_or(cfg.run.xi);
  }
  return simulate(sim);
}

// Applies --seed, --horizon and --tail-fraction to suite scenarios.
Scenario adjust(Scenario s, const RunConfig& cfg) {
  if (cfg.tail_fraction_override) s.tail_fraction = *cfg.tail_fraction_override;
  if (cfg.seed_override && s.forcing.stochastic()) s.seeds = expand_seed(*cfg.seed_override, s.name, s.seeds.size());
  if (cfg.horizon_override && !s.horizons.empty()) {
    const double scale = static_cast<double>(*cfg.horizon_override) / static_cast<double>(s.max_horizon());
    for (auto& h : s.horizons) h = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(h * scale)));
  }
  if (cfg.horizon_override || cfg.seed_override) s.validate();
  return s;
}

int cmd_simulate(const RunConfig& cfg) {
  const Path p = run_model(cfg);
  const auto file = out_file(cfg, "path.tsv");
  std::ofstream out(file);
  write_path(out, p);
  std::cout << "horizon " << p.horizon() << ", x(N) = " << format_double(p.x[p.horizon()])
            << ", fingerprint " << p.fingerprint << "\n"
            << "wrote " << file.string() << "\n";
  return 0;
}

int cmd_diagnose(const RunConfig& cfg) {
  const Path p = run_model(cfg);
  const DiagnoseResult d = diagnose(p, cfg.run.f, cfg.diagnostics);
  const auto pf = out_file(cfg, "path.tsv"), tf = out_file(cfg, "tracks.tsv"), sf = out_file(cfg, "summary.json");
  {
    std::ofstream out(pf);
    write_path(out, p);
  }
  {
    std::ofstream out(tf);
    write_columns(out, "tracks", p.fingerprint, d.tracks);
  }
  {
    std::ofstream out(sf);
    out << d.summary.dump(2) << "\n";
  }
  std::cout << d.summary.dump(2) << "\n"
            << "wrote " << pf.string() << ", " << tf.string() << ", " << sf.string() << "\n";
  return 0;
}

std::vector<Scenario> selected(const RunConfig& cfg, const std::vector<std::string>& names) {
  std::vector<Scenario> base = cfg.suite.empty() ? default_suite() : cfg.suite;
  if (names.empty()) return base;
  std::vector<Scenario> out;
  for (const auto& n : names) {
    bool found = false;
    for (const auto& s : base)
      if (s.name == n) out.push_back(s), found = true;
    if (!found) {
      if (auto d = find_default_scenario(n)) out.push_back(*d);
      else throw ConfigError({"unknown scenario '" + n + "'"});
    }
  }
  return out;
}

int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& names) {
  std::vector<Scenario> scenarios;
  for (auto& s : selected(cfg, names)) scenarios.push_back(adjust(s, cfg));
  const SuiteReport r = run_suite(scenarios);
  write_table(std::cout, r);
  const auto file = out_file(cfg, "report.jsonl");
  std::ofstream out(file);
  write_report(out, r);
  std::cout << "wrote " << file.string() << "\n";
  return r.any_fail() ? 1 : 0;
}

int cmd_sweep(const RunConfig& cfg) {
  if (!cfg.sweep) throw ConfigError({"sweep needs a [sweep] section"});
  const auto points = expand_sweep(cfg);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SuiteReport r = run_suite({adjust(points[i], cfg)});
    write_table(std::cout, r);
    const auto file = out_file(cfg, "sweep-" + std::to_string(i) + ".jsonl");
    std::ofstream out(file);
    write_report(out, r);
    std::cout << "wrote " << file.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and check nonlinear Volterra recursions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "base seed for stochastic forcing");
    sub->add_option("--horizon", opt.horizon, "horizon N (verify rescales each ladder to end at N)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", opt.out, "output directory (default $VOLTERRA_OUT_DIR or .)");
    sub->add_option("--tail-fraction", opt.tail_fraction, "fraction of indices used for tail statistics");
    auto* strict = sub->add_flag("--strict", "reject unknown configuration keys (default)");
    sub->add_flag("--permissive", opt.permissive, "warn about unknown configuration keys")->excludes(strict);
  };
  auto* simulate_cmd = app.add_subcommand("simulate", "run the recursion and write the path");
  auto* diagnose_cmd = app.add_subcommand("diagnose", "run the recursion and write tracks and a summary");
  auto* verify_cmd = app.add_subcommand("verify", "run theorem scenarios and write a report");
  auto* sweep_cmd = app.add_subcommand("sweep", "run a scenario over a parameter grid");
  for (auto* s : {simulate_cmd, diagnose_cmd, verify_cmd, sweep_cmd}) add_common(s);
  verify_cmd->add_option("--scenario", opt.scenarios, "run only the named scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate_cmd) return cmd_simulate(load(opt, "simulate"));
    if (*diagnose_cmd) return cmd_diagnose(load(opt, "diagnose"));
    if (*verify_cmd) return cmd_verify(load(opt, "verify"), opt.scenarios);
    if (*sweep_cmd) return cmd_sweep(load(opt, "sweep"));
  } catch (const ConfigError& e) {
    std::cerr << "configuration error:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return 2;
  } catch (const OverflowError& e) {
    std::cerr << "error: " << e.what() << " (index " << e.index() << ")\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
