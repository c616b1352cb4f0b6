#pragma once

// INI-style run configuration. Sections:
//
//   [run]          horizon, xi, mode, seed, overflow_limit, out
//   [kernel]       type = null|finite|geometric|polynomial, c, rho, beta, coefficients, trunc_tol
//   [nonlinearity] type = signed-power|bounded|table, alpha, bound, slope, xs, ys,
//                  envelope_scale, envelope_exponent, envelope_x0
//   [forcing]      type = <forcing type>|file, its parameters, path (for file)
//   [diagnostics]  tail_fraction, guard, scaler.*, weight.*
//   [suite]        scenarios = default | name, name, ...
//   [scenario X]   base, theorem, horizons, seeds, seed_count, tolerance, ... and
//                  dotted overrides such as kernel.rho or forcing.alpha
//   [sweep]        scenario, parameter (dotted key), values
//
// Lines starting with # or ; are comments. Every problem is collected with its
// line number before a ConfigError is thrown.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "volterra/diagnostics.hpp"
#include "volterra/errors.hpp"
#include "volterra/forcing.hpp"
#include "volterra/seqcore.hpp"
#include "volterra/theorems.hpp"

namespace volterra {

struct ConfigValue {
  std::string text;
  int line = 0;
};

using KeyMap = std::map<std::string, ConfigValue>;

struct DiagnosticsOptions {
  double tail_fraction = kDefaultTailFraction;
  double guard = kDefaultGuard;
  ScalerSpec scaler = ScalerSpec::sqrt_log();
  ConvexWeightSpec weight = ConvexWeightSpec::power(1.0);
};

struct SweepSpec {
  std::string scenario;
  std::string parameter;
  std::vector<std::string> values;
};

struct RunConfig {
  std::string subcommand;
  Scenario run;  ///< model assembled from [run], [kernel], [nonlinearity], [forcing]
  std::optional<std::string> forcing_file;
  DiagnosticsOptions diagnostics;
  std::vector<Scenario> suite;
  std::optional<SweepSpec> sweep;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::int64_t> horizon_override;
  std::optional<double> tail_fraction_override;
  std::string out_dir;
  bool strict = true;
  std::vector<std::string> warnings;

  std::int64_t horizon() const { return horizon_override.value_or(run.max_horizon()); }
};

namespace config_detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string where(int line) { return "line " + std::to_string(line) + ": "; }

// Accumulates problems while values are decoded.
class Collector {
 public:
  explicit Collector(bool strict) : strict_(strict) {}

  void error(int line, const std::string& msg) { errors_.push_back(line > 0 ? where(line) + msg : msg); }
  void unknown(int line, const std::string& what) {
    const std::string msg = where(line) + "unknown " + what;
    (strict_ ? errors_ : warnings_).push_back(msg);
  }

  std::optional<double> number(const std::string& key, const ConfigValue& v) {
    const std::string t = trim(v.text);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    double out = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (!t.empty() && *first == '+') ++first;
    auto [p, ec] = std::from_chars(first, last, out);
    if (t.empty() || ec != std::errc() || p != last) {
      error(v.line, "key '" + key + "' expects a number, got '" + t + "'");
      return std::nullopt;
    }
    return out;
  }

  std::optional<std::int64_t> integer(const std::string& key, const ConfigValue& v) {
    const auto d = number(key, v);
    if (!d) return std::nullopt;
    if (!(std::isfinite(*d) && *d == std::floor(*d) && std::abs(*d) < 9.0e18)) {
      error(v.line, "key '" + key + "' expects an integer, got '" + trim(v.text) + "'");
      return std::nullopt;
    }
    return static_cast<std::int64_t>(*d);
  }

  std::optional<std::uint64_t> unsigned_integer(const std::string& key, const ConfigValue& v) {
    const std::string t = trim(v.text);
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (t.empty() || ec != std::errc() || p != t.data() + t.size()) {
      error(v.line, "key '" + key + "' expects an unsigned 64-bit integer, got '" + t + "'");
      return std::nullopt;
    }
    return out;
  }

  std::vector<std::string> words(const ConfigValue& v) {
    std::string t = trim(v.text);
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
    std::vector<std::string> out;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  std::optional<std::vector<double>> numbers(const std::string& key, const ConfigValue& v) {
    std::vector<double> out;
    bool ok = true;
    for (const auto& w : words(v)) {
      const auto d = number(key, ConfigValue{w, v.line});
      if (d) out.push_back(*d);
      else ok = false;
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<bool> boolean(const std::string& key, const ConfigValue& v) {
    const std::string t = trim(v.text);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    error(v.line, "key '" + key + "' expects true or false, got '" + t + "'");
    return std::nullopt;
  }

  const std::vector<std::string>& errors() const { return errors_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  bool strict() const { return strict_; }

 private:
  bool strict_;
  std::vector<std::string> errors_;
  std::vector<std::string> warnings_;
};

// Keys under one dotted prefix ("kernel", "forcing", ...), with the prefix removed.
inline KeyMap sub(const KeyMap& m, const std::string& prefix) {
  KeyMap out;
  for (const auto& [k, v] : m)
    if (k.rfind(prefix + ".", 0) == 0) out[k.substr(prefix.size() + 1)] = v;
  return out;
}

inline int first_line(const KeyMap& m) {
  int line = 0;
  for (const auto& [k, v] : m)
    if (line == 0 || v.line < line) line = v.line;
  return line;
}

// Runs a constructor that may throw ArgumentError and records the message.
template <class Fn>
void guarded(Collector& c, int line, const std::string& what, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    c.error(line, what + ": " + e.what());
  }
}

inline const std::set<std::string>& allowed(const std::string& group) {
  static const std::map<std::string, std::set<std::string>> table = {
      {"kernel", {"type", "c", "rho", "beta", "coefficients", "trunc_tol"}},
      {"nonlinearity",
       {"type", "alpha", "bound", "slope", "xs", "ys", "envelope_scale", "envelope_exponent", "envelope_x0"}},
      {"forcing",
       {"type", "mu", "scale", "a", "pattern", "sigma", "alpha", "amplitude", "mu_plus", "mu_minus", "mode",
        "plus_scale", "plus_exponent", "minus_scale", "minus_exponent", "path"}},
      {"scaler", {"type", "scale", "p", "a"}},
      {"weight", {"type", "p", "a", "eta"}},
  };
  return table.at(group);
}

inline void check_keys(Collector& c, const KeyMap& m, const std::string& group, const std::string& label) {
  const auto& ok = allowed(group);
  for (const auto& [k, v] : m)
    if (!ok.count(k)) c.unknown(v.line, "key '" + label + k + "'");
}

inline std::optional<double> num_or(Collector& c, const KeyMap& m, const std::string& key, double fallback,
                                    const std::string& label) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  return c.number(label + key, it->second);
}

inline std::string type_of(const KeyMap& m, const std::string& fallback) {
  auto it = m.find("type");
  return it == m.end() ? fallback : trim(it->second.text);
}

inline std::string kernel_type(const KernelSpec& k) {
  if (k.is_null()) return "null";
  if (k.is_geometric()) return "geometric";
  if (k.is_finite()) return "finite";
  return "polynomial";
}

inline void build_kernel(Collector& c, const KeyMap& m, KernelSpec& kernel, const std::string& label) {
  if (m.empty()) return;
  check_keys(c, m, "kernel", label);
  const std::string type = type_of(m, kernel_type(kernel));
  const int line = first_line(m);
  double c0 = 1.0, rho = 0.5, beta = 2.0;
  if (const auto* g = std::get_if<GeometricKernel>(&kernel.variant())) c0 = g->c, rho = g->rho;
  if (const auto* p = std::get_if<PolynomialKernel>(&kernel.variant())) c0 = p->c, beta = p->beta;
  const auto tol = num_or(c, m, "trunc_tol", kernel.trunc_tol(), label);
  const auto cc = num_or(c, m, "c", c0, label);
  if (!tol || !cc) return;
  if (type == "null") {
    kernel = KernelSpec::null();
  } else if (type == "geometric") {
    const auto r = num_or(c, m, "rho", rho, label);
    if (r) guarded(c, line, "kernel", [&] { kernel = KernelSpec::geometric(*cc, *r, *tol); });
  } else if (type == "polynomial") {
    const auto b = num_or(c, m, "beta", beta, label);
    if (b) guarded(c, line, "kernel", [&] { kernel = KernelSpec::polynomial(*cc, *b, *tol); });
  } else if (type == "finite") {
    auto it = m.find("coefficients");
    if (it == m.end()) {
      c.error(line, "finite kernel needs '" + label + "coefficients'");
      return;
    }
    const auto coeffs = c.numbers(label + "coefficients", it->second);
    if (coeffs) guarded(c, line, "kernel", [&] { kernel = KernelSpec::finite(*coeffs, *tol); });
  } else {
    c.error(m.count("type") ? m.at("type").line : line, "unknown kernel type '" + type + "'");
  }
}

inline void build_nonlinearity(Collector& c, const KeyMap& m, NonlinearitySpec& f, const std::string& label) {
  if (m.empty()) return;
  check_keys(c, m, "nonlinearity", label);
  const int line = first_line(m);
  std::string fallback = "signed-power";
  if (std::holds_alternative<BoundedRamp>(f.variant())) fallback = "bounded";
  if (std::holds_alternative<TableNonlinearity>(f.variant())) fallback = "table";
  const std::string type = type_of(m, fallback);

  std::optional<Envelope> env = f.envelope();
  if (m.count("envelope_scale") || m.count("envelope_exponent") || m.count("envelope_x0")) {
    const Envelope base = env.value_or(Envelope{});
    const auto s = num_or(c, m, "envelope_scale", base.scale, label);
    const auto e = num_or(c, m, "envelope_exponent", base.exponent, label);
    const auto x0 = num_or(c, m, "envelope_x0", base.x0, label);
    if (!s || !e || !x0) return;
    env = Envelope{*s, *e, *x0};
  }
  if (type == "signed-power") {
    const auto a = num_or(c, m, "alpha", f.power_exponent().value_or(0.5), label);
    if (a) guarded(c, line, "nonlinearity", [&] { f = NonlinearitySpec(SignedPower{*a}, env); });
  } else if (type == "bounded") {
    BoundedRamp base;
    if (const auto* b = std::get_if<BoundedRamp>(&f.variant())) base = *b;
    const auto M = num_or(c, m, "bound", base.bound, label);
    const auto s = num_or(c, m, "slope", base.slope, label);
    if (M && s) guarded(c, line, "nonlinearity", [&] { f = NonlinearitySpec(BoundedRamp{*M, *s}, env); });
  } else if (type == "table") {
    auto xi = m.find("xs");
    auto yi = m.find("ys");
    if (xi == m.end() || yi == m.end()) {
      c.error(line, "table nonlinearity needs '" + label + "xs' and '" + label + "ys'");
      return;
    }
    const auto xs = c.numbers(label + "xs", xi->second);
    const auto ys = c.numbers(label + "ys", yi->second);
    if (xs && ys) guarded(c, line, "nonlinearity", [&] { f = NonlinearitySpec(TableNonlinearity{*xs, *ys}, env); });
  } else {
    c.error(m.count("type") ? m.at("type").line : line, "unknown nonlinearity type '" + type + "'");
  }
}

// Builds a forcing spec; `kernel` is used by the constructed variant. Returns
// the file path when type = file.
inline std::optional<std::string> build_forcing(Collector& c, const KeyMap& m, ForcingSpec& spec, const KernelSpec& kernel,
                                                SolverMode mode, const std::string& label) {
  if (m.empty()) return std::nullopt;
  check_keys(c, m, "forcing", label);
  const int line = first_line(m);
  const std::string type = type_of(m, spec.type_name());
  const std::uint64_t seed = spec.seed();
  auto num = [&](const std::string& k, double d) { return num_or(c, m, k, d, label); };
  auto set = [&](ForcingVariant v) { guarded(c, line, "forcing", [&] { spec = ForcingSpec(std::move(v), seed); }); };
  const auto& cur = spec.variant();

  if (type == "file") {
    auto it = m.find("path");
    if (it == m.end()) {
      c.error(line, "file forcing needs '" + label + "path'");
      return std::nullopt;
    }
    return trim(it->second.text);
  }
  if (type == "monotone-power") {
    MonotonePower b;
    if (auto* p = std::get_if<MonotonePower>(&cur)) b = *p;
    auto mu = num("mu", b.mu), s = num("scale", b.scale);
    if (mu && s) set(MonotonePower{*mu, *s});
  } else if (type == "periodic-exponential") {
    PeriodicExponential b;
    if (auto* p = std::get_if<PeriodicExponential>(&cur)) b = *p;
    auto a = num("a", b.a);
    if (auto it = m.find("pattern"); it != m.end()) {
      auto pat = c.numbers(label + "pattern", it->second);
      if (!pat) return std::nullopt;
      b.pattern = *pat;
    }
    if (a) set(PeriodicExponential{*a, b.pattern});
  } else if (type == "gaussian-iid") {
    GaussianIid b;
    if (auto* p = std::get_if<GaussianIid>(&cur)) b = *p;
    if (auto s = num("sigma", b.sigma)) set(GaussianIid{*s});
  } else if (type == "heavytail-iid") {
    HeavyTailIid b;
    if (auto* p = std::get_if<HeavyTailIid>(&cur)) b = *p;
    if (auto a = num("alpha", b.alpha)) set(HeavyTailIid{*a});
  } else if (type == "bounded-oscillation") {
    BoundedOscillation b;
    if (auto* p = std::get_if<BoundedOscillation>(&cur)) b = *p;
    if (auto a = num("amplitude", b.amplitude)) set(BoundedOscillation{*a});
  } else if (type == "constructed-alternating") {
    ConstructedAlternating b;
    if (auto* p = std::get_if<ConstructedAlternating>(&cur)) b = *p;
    auto mp = num("mu_plus", b.mu_plus), mm = num("mu_minus", b.mu_minus), a = num("alpha", b.alpha);
    SolverMode md = mode;
    if (auto it = m.find("mode"); it != m.end()) {
      guarded(c, it->second.line, "forcing", [&] { md = solver_mode_from_string(trim(it->second.text)); });
    }
    if (mp && mm && a) set(ConstructedAlternating{*mp, *mm, *a, kernel, md});
  } else if (type == "signed-alternating") {
    SignedAlternating b;
    if (auto* p = std::get_if<SignedAlternating>(&cur)) b = *p;
    auto ps = num("plus_scale", b.plus_scale), pe = num("plus_exponent", b.plus_exponent);
    auto ms = num("minus_scale", b.minus_scale), me = num("minus_exponent", b.minus_exponent);
    if (ps && pe && ms && me) set(SignedAlternating{*ps, *pe, *ms, *me});
  } else {
    c.error(m.count("type") ? m.at("type").line : line, "unknown forcing type '" + type + "'");
  }
  return std::nullopt;
}

inline void build_scaler(Collector& c, const KeyMap& m, std::optional<ScalerSpec>& out, const std::string& label) {
  if (m.empty()) return;
  check_keys(c, m, "scaler", label);
  const int line = first_line(m);
  const std::string type = type_of(m, "sqrt-log");
  auto num = [&](const std::string& k, double d) { return num_or(c, m, k, d, label); };
  if (type == "sqrt-log") {
    if (auto s = num("scale", 1.0)) guarded(c, line, "scaler", [&] { out = ScalerSpec::sqrt_log(*s); });
  } else if (type == "power") {
    auto p = num("p", 1.0), s = num("scale", 1.0);
    if (p && s) guarded(c, line, "scaler", [&] { out = ScalerSpec::power(*p, *s); });
  } else if (type == "exponential") {
    if (auto a = num("a", 1.0)) guarded(c, line, "scaler", [&] { out = ScalerSpec::exponential(*a); });
  } else {
    c.error(m.count("type") ? m.at("type").line : line, "unknown scaler type '" + type + "'");
  }
}

inline void build_weight(Collector& c, const KeyMap& m, std::optional<ConvexWeightSpec>& out, const std::string& label) {
  if (m.empty()) return;
  check_keys(c, m, "weight", label);
  const int line = first_line(m);
  const std::string type = type_of(m, "power");
  auto num = [&](const std::string& k, double d) { return num_or(c, m, k, d, label); };
  const auto eta = num("eta", 0.0);
  if (!eta) return;
  if (type == "power") {
    if (auto p = num("p", 1.0)) guarded(c, line, "weight", [&] { out = ConvexWeightSpec::power(*p, *eta); });
  } else if (type == "gaussian-exp") {
    if (auto a = num("a", 0.3)) guarded(c, line, "weight", [&] { out = ConvexWeightSpec::gaussian_exp(*a, *eta); });
  } else {
    c.error(m.count("type") ? m.at("type").line : line, "unknown weight type '" + type + "'");
  }
}

inline const std::set<std::string>& scenario_scalar_keys() {
  static const std::set<std::string> keys = {"base",     "theorem",       "horizons", "seeds",   "seed_count",
                                             "tolerance", "xi",           "mode",     "tail_fraction",
                                             "overflow_limit", "lambda",  "lambda2",  "expected", "band",
                                             "divergent"};
  return keys;
}

// Applies flat dotted keys to a scenario. Used for [scenario X] sections and
// sweep grid points.
inline void apply_scenario_keys(Collector& c, const KeyMap& m, Scenario& s) {
  for (const auto& [k, v] : m) {
    const auto dot = k.find('.');
    if (dot == std::string::npos) {
      if (!scenario_scalar_keys().count(k)) c.unknown(v.line, "key '" + k + "'");
      continue;
    }
    const std::string group = k.substr(0, dot);
    if (group != "kernel" && group != "nonlinearity" && group != "forcing" && group != "scaler" &&
        group != "scaler_minus" && group != "weight")
      c.unknown(v.line, "key '" + k + "'");
  }

  auto get = [&](const std::string& k) -> const ConfigValue* {
    auto it = m.find(k);
    return it == m.end() ? nullptr : &it->second;
  };
  if (auto* v = get("theorem")) s.theorem = trim(v->text);
  if (auto* v = get("mode")) guarded(c, v->line, "mode", [&] { s.mode = solver_mode_from_string(trim(v->text)); });
  if (auto* v = get("horizons")) {
    std::vector<std::int64_t> hs;
    for (const auto& w : c.words(*v))
      if (auto n = c.integer("horizons", ConfigValue{w, v->line})) hs.push_back(*n);
    s.horizons = hs;
  }
  if (auto* v = get("seeds")) {
    std::vector<std::uint64_t> ss;
    for (const auto& w : c.words(*v))
      if (auto n = c.unsigned_integer("seeds", ConfigValue{w, v->line})) ss.push_back(*n);
    s.seeds = ss;
  }
  if (auto* v = get("seed_count")) {
    if (auto n = c.integer("seed_count", *v)) {
      s.seeds.clear();
      for (std::int64_t i = 1; i <= *n; ++i) s.seeds.push_back(static_cast<std::uint64_t>(i));
    }
  }
  auto num_into = [&](const char* k, auto& field) {
    if (auto* v = get(k))
      if (auto d = c.number(k, *v)) field = *d;
  };
  num_into("tolerance", s.tolerance);
  num_into("xi", s.xi);
  num_into("tail_fraction", s.tail_fraction);
  num_into("overflow_limit", s.overflow_limit);
  num_into("lambda", s.declared_lambda);
  num_into("lambda2", s.declared_lambda2);
  num_into("expected", s.expected);
  if (auto* v = get("band")) {
    if (auto b = c.numbers("band", *v)) {
      if (b->size() == 2) s.band = std::make_pair((*b)[0], (*b)[1]);
      else c.error(v->line, "key 'band' expects two numbers");
    }
  }
  if (auto* v = get("divergent"))
    if (auto b = c.boolean("divergent", *v)) s.expect_divergent = *b;

  build_kernel(c, sub(m, "kernel"), s.kernel, "kernel.");
  build_nonlinearity(c, sub(m, "nonlinearity"), s.f, "nonlinearity.");
  // A constructed forcing follows the scenario kernel unless it is rebuilt.
  if (auto* ca = std::get_if<ConstructedAlternating>(&s.forcing.variant()); ca && !sub(m, "kernel").empty()) {
    ConstructedAlternating copy = *ca;
    copy.kernel = s.kernel;
    s.forcing = ForcingSpec(copy, s.forcing.seed());
  }
  if (build_forcing(c, sub(m, "forcing"), s.forcing, s.kernel, s.mode, "forcing."))
    c.error(first_line(sub(m, "forcing")), "file forcing is only available to simulate and diagnose");
  build_scaler(c, sub(m, "scaler"), s.scaler, "scaler.");
  build_scaler(c, sub(m, "scaler_minus"), s.scaler_minus, "scaler_minus.");
  build_weight(c, sub(m, "weight"), s.weight, "weight.");
}

}  // namespace config_detail

struct ParsedIni {
  std::vector<std::pair<std::string, KeyMap>> sections;  ///< in file order
};

/// Splits text into sections of key = value pairs. Problems go to `c`.
inline ParsedIni parse_ini(const std::string& text, config_detail::Collector& c) {
  using config_detail::trim;
  ParsedIni out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  KeyMap* current = nullptr;
  while (std::getline(in, raw)) {
    ++line;
    const std::string t = trim(raw);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        c.error(line, "malformed section header '" + t + "'");
        current = nullptr;
        continue;
      }
      const std::string name = trim(t.substr(1, t.size() - 2));
      for (auto& [n, km] : out.sections)
        if (n == name) c.error(line, "duplicate section [" + name + "]");
      out.sections.emplace_back(name, KeyMap{});
      current = &out.sections.back().second;
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      c.error(line, "expected 'key = value', got '" + t + "'");
      continue;
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (!current) {
      c.error(line, "key '" + key + "' appears before any section");
      continue;
    }
    if (key.empty()) {
      c.error(line, "empty key");
      continue;
    }
    if (current->count(key)) c.error(line, "duplicate key '" + key + "'");
    (*current)[key] = ConfigValue{value, line};
  }
  return out;
}

/// Apply a sweep grid value to a scenario (parameter is a dotted key).
inline Scenario apply_override(const Scenario& base, const std::string& key, const std::string& value) {
  config_detail::Collector c(true);
  Scenario s = base;
  config_detail::apply_scenario_keys(c, KeyMap{{key, ConfigValue{value, 0}}}, s);
  if (!c.errors().empty()) throw ConfigError(c.errors());
  return s;
}

/// Parses and validates a configuration. Throws ConfigError listing every
/// problem found.
inline RunConfig parse_config(const std::string& text, bool strict = true) {
  using namespace config_detail;
  Collector c(strict);
  const ParsedIni ini = parse_ini(text, c);
  RunConfig cfg;
  cfg.strict = strict;

  // Model defaults for simulate/diagnose.
  cfg.run.name = "run";
  cfg.run.theorem = "maxratio";
  cfg.run.forcing = ForcingSpec(GaussianIid{1.0}, 0);
  cfg.run.horizons = {1000};

  KeyMap run_keys, kernel_keys, f_keys, forcing_keys, diag_keys, suite_keys, sweep_keys;
  std::vector<std::pair<std::string, KeyMap>> scenario_sections;
  for (const auto& [name, km] : ini.sections) {
    if (name == "run") run_keys = km;
    else if (name == "kernel") kernel_keys = km;
    else if (name == "nonlinearity") f_keys = km;
    else if (name == "forcing") forcing_keys = km;
    else if (name == "diagnostics") diag_keys = km;
    else if (name == "suite") suite_keys = km;
    else if (name == "sweep") sweep_keys = km;
    else if (name.rfind("scenario ", 0) == 0) scenario_sections.emplace_back(trim(name.substr(9)), km);
    else c.unknown(first_line(km), "section [" + name + "]");
  }

  // [run]
  static const std::set<std::string> run_allowed = {"horizon", "xi", "mode", "seed", "overflow_limit", "out"};
  for (const auto& [k, v] : run_keys)
    if (!run_allowed.count(k)) c.unknown(v.line, "key '" + k + "' in [run]");
  if (auto it = run_keys.find("horizon"); it != run_keys.end()) {
    if (auto n = c.integer("horizon", it->second)) {
      if (*n < 1) c.error(it->second.line, "horizon must be at least 1");
      else cfg.run.horizons = {*n};
    }
  }
  if (auto it = run_keys.find("xi"); it != run_keys.end())
    if (auto d = c.number("xi", it->second)) cfg.run.xi = *d;
  if (auto it = run_keys.find("overflow_limit"); it != run_keys.end())
    if (auto d = c.number("overflow_limit", it->second)) cfg.run.overflow_limit = *d;
  if (auto it = run_keys.find("mode"); it != run_keys.end())
    guarded(c, it->second.line, "mode", [&] { cfg.run.mode = solver_mode_from_string(trim(it->second.text)); });
  if (auto it = run_keys.find("seed"); it != run_keys.end())
    if (auto s = c.unsigned_integer("seed", it->second)) cfg.run.seeds = {*s};
  if (auto it = run_keys.find("out"); it != run_keys.end()) cfg.out_dir = trim(it->second.text);

  // Model sections.
  build_kernel(c, kernel_keys, cfg.run.kernel, "");
  build_nonlinearity(c, f_keys, cfg.run.f, "");
  cfg.forcing_file = build_forcing(c, forcing_keys, cfg.run.forcing, cfg.run.kernel, cfg.run.mode, "");

  // [diagnostics]
  {
    KeyMap plain;
    for (const auto& [k, v] : diag_keys) {
      if (k.rfind("scaler.", 0) == 0 || k.rfind("weight.", 0) == 0) continue;
      if (k != "tail_fraction" && k != "guard") c.unknown(v.line, "key '" + k + "' in [diagnostics]");
      plain[k] = v;
    }
    if (auto it = plain.find("tail_fraction"); it != plain.end()) {
      if (auto d = c.number("tail_fraction", it->second)) {
        if (!(*d > 0.0 && *d <= 1.0)) c.error(it->second.line, "tail_fraction must lie in (0,1]");
        else cfg.diagnostics.tail_fraction = *d;
      }
    }
    if (auto it = plain.find("guard"); it != plain.end())
      if (auto d = c.number("guard", it->second)) cfg.diagnostics.guard = *d;
    std::optional<ScalerSpec> sc;
    build_scaler(c, sub(diag_keys, "scaler"), sc, "scaler.");
    if (sc) cfg.diagnostics.scaler = *sc;
    std::optional<ConvexWeightSpec> w;
    build_weight(c, sub(diag_keys, "weight"), w, "weight.");
    if (w) cfg.diagnostics.weight = *w;
  }

  // [scenario X] sections, resolved against the shipped defaults.
  std::map<std::string, Scenario> custom;
  for (const auto& [name, km] : scenario_sections) {
    Scenario s;
    const auto base_it = km.find("base");
    const std::string base = base_it != km.end() ? trim(base_it->second.text) : name;
    if (auto d = find_default_scenario(base)) {
      s = *d;
    } else if (base_it != km.end()) {
      c.error(base_it->second.line, "unknown base scenario '" + base + "'");
      continue;
    } else {
      s.kernel = KernelSpec::geometric(1.0, 0.5);
    }
    s.name = name;
    apply_scenario_keys(c, km, s);
    guarded(c, first_line(km), "scenario " + name, [&] { s.validate(); });
    custom[name] = s;
  }

  // [suite]
  for (const auto& [k, v] : suite_keys)
    if (k != "scenarios") c.unknown(v.line, "key '" + k + "' in [suite]");
  auto add_named = [&](const std::string& n, int line) {
    if (auto it = custom.find(n); it != custom.end()) cfg.suite.push_back(it->second);
    else if (auto d = find_default_scenario(n)) cfg.suite.push_back(*d);
    else c.error(line, "unknown scenario '" + n + "'");
  };
  if (auto it = suite_keys.find("scenarios"); it != suite_keys.end()) {
    for (const auto& w : c.words(it->second)) {
      if (w == "default") {
        for (auto& d : default_suite()) cfg.suite.push_back(custom.count(d.name) ? custom[d.name] : d);
      } else {
        add_named(w, it->second.line);
      }
    }
  } else if (!custom.empty()) {
    for (auto& [n, s] : custom) cfg.suite.push_back(s);
  }

  // [sweep]
  if (!sweep_keys.empty()) {
    SweepSpec sw;
    for (const auto& [k, v] : sweep_keys)
      if (k != "scenario" && k != "parameter" && k != "values") c.unknown(v.line, "key '" + k + "' in [sweep]");
    const int line = first_line(sweep_keys);
    if (auto it = sweep_keys.find("scenario"); it != sweep_keys.end()) sw.scenario = trim(it->second.text);
    else c.error(line, "[sweep] needs 'scenario'");
    if (auto it = sweep_keys.find("parameter"); it != sweep_keys.end()) sw.parameter = trim(it->second.text);
    else c.error(line, "[sweep] needs 'parameter'");
    if (auto it = sweep_keys.find("values"); it != sweep_keys.end()) sw.values = c.words(it->second);
    else c.error(line, "[sweep] needs 'values'");
    if (!sw.scenario.empty() && !custom.count(sw.scenario) && !find_default_scenario(sw.scenario))
      c.error(line, "unknown sweep scenario '" + sw.scenario + "'");
    if (c.errors().empty() && !sw.scenario.empty()) {
      const Scenario base = custom.count(sw.scenario) ? custom[sw.scenario] : *find_default_scenario(sw.scenario);
      for (const auto& v : sw.values) {
        try {
          apply_override(base, sw.parameter, v).validate();
        } catch (const ConfigError& e) {
          for (const auto& p : e.problems()) c.error(sweep_keys.at("values").line, "sweep value '" + v + "': " + p);
        } catch (const Error& e) {
          c.error(sweep_keys.at("values").line, "sweep value '" + v + "': " + e.what());
        }
      }
    }
    cfg.sweep = sw;
  }

  cfg.warnings = c.warnings();
  if (!c.errors().empty()) throw ConfigError(c.errors());
  return cfg;
}

/// Resolve the sweep into one scenario per grid point.
inline std::vector<Scenario> expand_sweep(const RunConfig& cfg) {
  std::vector<Scenario> out;
  if (!cfg.sweep) return out;
  std::optional<Scenario> base;
  for (const auto& s : cfg.suite)
    if (s.name == cfg.sweep->scenario) base = s;
  if (!base) base = find_default_scenario(cfg.sweep->scenario);
  if (!base) throw ArgumentError("unknown sweep scenario '" + cfg.sweep->scenario + "'");
  for (const auto& v : cfg.sweep->values) {
    Scenario s = apply_override(*base, cfg.sweep->parameter, v);
    s.name = base->name + "@" + cfg.sweep->parameter + "=" + v;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace volterra
