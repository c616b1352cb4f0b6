#pragma once

// Output formats. Columnar files are tab-separated with a short comment
// header naming the tool version, the fingerprint and the file kind, then one
// header row. Doubles use %.17g so every value round-trips exactly. Reports
// are JSON Lines, one record per theorem check.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "volterra/canonical.hpp"
#include "volterra/config.hpp"
#include "volterra/diagnostics.hpp"
#include "volterra/engine.hpp"
#include "volterra/errors.hpp"
#include "volterra/theorems.hpp"

namespace volterra {

struct Columns {
  std::map<std::string, std::string> meta;  ///< from "# key: value" lines
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw ArgumentError("column '" + name + "' not found");
  }
  bool has(const std::string& name) const {
    for (const auto& n : names)
      if (n == name) return true;
    return false;
  }
};

inline void write_columns(std::ostream& out, const std::string& kind, const std::string& fingerprint,
                          const Columns& cols) {
  out << "# volterra " << kToolVersion << "\n";
  out << "# fingerprint: " << fingerprint << "\n";
  out << "# kind: " << kind << "\n";
  for (const auto& [k, v] : cols.meta)
    if (k != "fingerprint" && k != "kind" && k != "volterra") out << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < cols.names.size(); ++i) out << (i ? "\t" : "") << cols.names[i];
  out << "\n";
  for (const auto& row : cols.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << format_double(row[i]);
    out << "\n";
  }
}

inline Columns read_columns(std::istream& in) {
  Columns cols;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.substr(1);
      const auto colon = body.find(':');
      if (colon != std::string::npos) {
        auto trim = [](std::string s) {
          s.erase(0, s.find_first_not_of(' '));
          s.erase(s.find_last_not_of(' ') + 1);
          return s;
        };
        cols.meta[trim(body.substr(0, colon))] = trim(body.substr(colon + 1));
      }
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (cols.names.empty()) {
      cols.names = fields;
      continue;
    }
    if (fields.size() != cols.names.size())
      throw ArgumentError("line " + std::to_string(lineno) + ": expected " + std::to_string(cols.names.size()) +
                          " fields, got " + std::to_string(fields.size()));
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (f.empty() || *end != '\0')
        throw ArgumentError("line " + std::to_string(lineno) + ": cannot parse '" + f + "' as a number");
      row.push_back(v);
    }
    cols.rows.push_back(std::move(row));
  }
  if (cols.names.empty()) throw ArgumentError("columnar file has no header row");
  return cols;
}

inline Columns read_columns_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  return read_columns(in);
}

/// Columns n, H, x, S_prev with S_prev(n) = S(n-1); H and S_prev are nan at n = 0.
inline Columns path_columns(const Path& p) {
  Columns cols;
  cols.names = {"n", "H", "x", "S_prev"};
  const double nan = std::nan("");
  cols.rows.reserve(static_cast<std::size_t>(p.horizon() + 1));
  for (std::int64_t n = 0; n <= p.horizon(); ++n) {
    const bool first = n == 0;
    cols.rows.push_back({static_cast<double>(n), first ? nan : p.h[n], p.x[n], first ? nan : p.s[n - 1]});
  }
  cols.meta["horizon"] = std::to_string(p.horizon());
  cols.meta["s_error_bound"] = format_double(p.s_error_bound);
  return cols;
}

inline void write_path(std::ostream& out, const Path& p) { write_columns(out, "path", p.fingerprint, path_columns(p)); }

/// Loads a forcing for replay from a columnar file with columns n and H (any
/// path file qualifies). When an x column is present, x(0) becomes the
/// initial state so the replayed path matches the original.
inline ForcingSequence read_forcing(const Columns& cols) {
  const std::size_t in = cols.index_of("n");
  const std::size_t ih = cols.index_of("H");
  const bool has_x = cols.has("x");
  const std::size_t ix = has_x ? cols.index_of("x") : 0;
  std::vector<double> h;
  std::optional<double> x0;
  for (const auto& row : cols.rows) {
    const double n = row[in];
    if (n == 0.0) {
      if (has_x) x0 = row[ix];
      continue;
    }
    if (n != static_cast<double>(h.size() + 1))
      throw ArgumentError("forcing file indices must run 1, 2, ... without gaps");
    if (!std::isfinite(row[ih])) throw DomainError("forcing file has a non-finite H at n=" + format_double(n));
    h.push_back(row[ih]);
  }
  if (h.empty()) throw ArgumentError("forcing file contains no H values");
  std::string fp;
  if (auto it = cols.meta.find("fingerprint"); it != cols.meta.end()) fp = "file:" + it->second;
  ForcingSequence seq = ForcingSequence::from_values(std::move(h), fp);
  seq.initial_state = x0;
  return seq;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

/// Numbers stay numbers when finite; nan and infinities become strings.
inline nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

inline std::string suite_fingerprint(const SuiteReport& r) {
  std::uint64_t h = fnv1a64("suite");
  for (const auto& c : r.checks) h = fnv1a64(c.fingerprint + ";", h);
  return hex64(h);
}

inline nlohmann::ordered_json check_to_json(const TheoremCheck& c, const std::string& suite_fp = {}) {
  nlohmann::ordered_json j;
  j["tool_version"] = kToolVersion;
  if (!suite_fp.empty()) j["suite_fingerprint"] = suite_fp;
  j["scenario"] = c.scenario;
  j["theorem"] = c.theorem;
  j["fingerprint"] = c.fingerprint;
  j["verdict"] = std::string(to_string(c.verdict));
  j["statistic"] = c.statistic;
  j["horizons"] = c.horizons;
  j["seeds"] = c.seeds;
  auto stats = nlohmann::ordered_json::array();
  for (double v : c.statistics) stats.push_back(json_number(v));
  j["statistics"] = stats;
  j["tolerance"] = json_number(c.tolerance);
  j["detail"] = c.detail;
  nlohmann::ordered_json extras = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.extras) extras[k] = json_number(v);
  j["extras"] = extras;
  return j;
}

inline void write_report(std::ostream& out, const SuiteReport& r) {
  const std::string fp = suite_fingerprint(r);
  for (const auto& c : r.checks) out << check_to_json(c, fp).dump() << "\n";
}

inline std::vector<nlohmann::ordered_json> read_report(std::istream& in) {
  std::vector<nlohmann::ordered_json> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(nlohmann::ordered_json::parse(line));
  return out;
}

inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

/// Fixed-width summary table for terminals.
inline void write_table(std::ostream& out, const SuiteReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-30s %-26s %-13s %-11s %-10s %s\n", "scenario", "theorem", "verdict", "statistic",
                "tolerance", "per-horizon");
  out << buf;
  for (const auto& c : r.checks) {
    std::string per;
    for (std::size_t i = 0; i < c.statistics.size(); ++i) per += (i ? " " : "") + short_number(c.statistics[i]);
    const double last = c.statistics.empty() ? std::nan("") : c.statistics.back();
    std::snprintf(buf, sizeof buf, "%-30s %-26s %-13s %-11s %-10s ", c.scenario.c_str(), c.theorem.c_str(),
                  std::string(to_string(c.verdict)).c_str(), short_number(last).c_str(),
                  short_number(c.tolerance).c_str());
    out << buf << per << "\n";
  }
  std::size_t pass = 0, fail = 0, inc = 0;
  for (const auto& c : r.checks) {
    if (c.verdict == Verdict::Pass) ++pass;
    else if (c.verdict == Verdict::Fail) ++fail;
    else ++inc;
  }
  out << pass << " pass, " << fail << " fail, " << inc << " inconclusive\n";
}

// ---------------------------------------------------------------------------
// Diagnostics of a single path
// ---------------------------------------------------------------------------

struct DiagnoseResult {
  Columns tracks;
  nlohmann::ordered_json summary;
};

/// Tracks for x and H (running maxima, ratio, signed maxima, scaled maxima,
/// phi averages) plus a summary of the limiting quantities.
inline DiagnoseResult diagnose(const Path& p, const NonlinearitySpec& f, const DiagnosticsOptions& opt) {
  const std::int64_t N = p.horizon();
  if (N < 1) throw ArgumentError("diagnose needs a horizon of at least 1");
  const RealSeq x1{1, std::vector<double>(p.x.values.begin() + 1, p.x.values.end())};
  const RealSeq& H = p.h;
  const auto xs = running_max_abs(x1), hs = running_max_abs(H);
  const auto xp = running_signed_max(x1, Side::Plus), xm = running_signed_max(x1, Side::Minus);
  const auto hp = running_signed_max(H, Side::Plus), hm = running_signed_max(H, Side::Minus);
  const auto ratio = ratio_track(xs.values, hs.values, opt.guard);

  nlohmann::ordered_json s;
  s["tool_version"] = kToolVersion;
  s["fingerprint"] = p.fingerprint;
  s["horizon"] = N;
  s["s_error_bound"] = json_number(p.s_error_bound);
  s["x_star"] = json_number(xs.values[N]);
  s["x_star_argmax"] = xs.argmax_at(N);
  s["H_star"] = json_number(hs.values[N]);
  s["x_star_over_H_star"] = json_number(ratio.summary.mean);
  s["ratio_gaps"] = ratio.gaps;

  auto lambda_json = [](const LambdaEstimate& e) {
    nlohmann::ordered_json j;
    j["final"] = json_number(e.final);
    j["regime"] = std::string(to_string(e.regime));
    j["divergence_slope"] = json_number(e.divergence.slope);
    return j;
  };
  try {
    s["lambda"] = lambda_json(estimate_lambda(H));
    s["lambda2"] = lambda_json(estimate_lambda2(H, f));
  } catch (const DegenerateInputError& e) {
    s["lambda"] = e.what();
  }

  std::vector<double> a_col(static_cast<std::size_t>(N), std::nan(""));
  for (std::int64_t n = 1; n <= N; ++n)
    if (opt.scaler.defined_at(n)) a_col[static_cast<std::size_t>(n - 1)] = opt.scaler(n);
  s["scaler"] = opt.scaler.canonical();
  try {
    s["x_tail_sup_over_a"] = json_number(tail_sup_ratio(x1, opt.scaler, opt.tail_fraction));
    s["H_tail_sup_over_a"] = json_number(tail_sup_ratio(H, opt.scaler, opt.tail_fraction));
  } catch (const Error& e) {
    s["x_tail_sup_over_a"] = e.what();
  }

  s["weight"] = opt.weight.canonical();
  std::vector<double> ax(static_cast<std::size_t>(N), std::nan("")), ah = ax;
  auto fill_phi = [&](const RealSeq& seq, std::vector<double>& col, const char* key) {
    try {
      const auto t = phi_time_average(seq, opt.weight);
      col = t.values;
      s[key] = json_number(t.values.back());
    } catch (const OverflowError& e) {
      s[key] = "overflow at n=" + std::to_string(e.index());
    }
  };
  fill_phi(x1, ax, "A_x");
  fill_phi(H, ah, "A_H");

  DiagnoseResult out;
  out.tracks.names = {"n",       "x_star",  "x_argmax", "H_star", "x_over_H", "x_plus", "x_minus",
                      "H_plus",  "H_minus", "a",        "A_x",    "A_H"};
  out.tracks.rows.reserve(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n <= N; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    out.tracks.rows.push_back({static_cast<double>(n), xs.values[n], static_cast<double>(xs.argmax_at(n)),
                               hs.values[n], ratio.values[n], xp.values[n], xm.values[n], hp.values[n], hm.values[n],
                               a_col[i], ax[i], ah[i]});
  }
  out.summary = std::move(s);
  return out;
}

}  // namespace volterra
