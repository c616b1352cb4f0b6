#pragma once

// Seeded, tolerance-checked experiments, one per asymptotic statement. Each
// scenario simulates once per seed at its largest horizon and evaluates the
// smaller horizons on prefixes of the same path.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "volterra/canonical.hpp"
#include "volterra/diagnostics.hpp"
#include "volterra/engine.hpp"
#include "volterra/errors.hpp"
#include "volterra/forcing.hpp"
#include "volterra/seqcore.hpp"

namespace volterra {

enum class Verdict { Pass, Fail, Inconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "inconclusive";
  }
}

inline constexpr double kLadderSlack = 0.2;
inline constexpr double kRegimeTolerance = 0.2;
inline constexpr double kTrendDeadZone = 0.03;

/// Theorem ids understood by run_scenario.
inline const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {
      "bounded-a",          "bounded-b",         "maxratio",
      "argmax-coupling",    "growth-up",         "growth-down",
      "modulated-growth",   "signedfluc-lambda-lt-1", "signedfluc-lambda-gt-1",
      "signedfluc-lambda-eq-1", "signedfluc2-lambda-finite", "signedfluc2-lambda-zero",
      "signedfluc2-lambda-inf", "signedfluct-lambda2", "limsup-rho",
      "limsup-squeeze",     "limsup-signed",     "ergodic-phi",
      "pth-moment"};
  return ids;
}

inline bool is_theorem_id(const std::string& id) {
  const auto& ids = theorem_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

struct Scenario {
  std::string name;
  std::string theorem;
  KernelSpec kernel = KernelSpec::geometric(1.0, 0.5);
  NonlinearitySpec f = NonlinearitySpec::signed_power(0.5);
  ForcingSpec forcing;
  double xi = 0.0;
  SolverMode mode = SolverMode::Auto;
  double overflow_limit = 1e300;
  std::vector<std::int64_t> horizons;
  std::vector<std::uint64_t> seeds{0};
  double tolerance = 0.05;
  double tail_fraction = kDefaultTailFraction;

  std::optional<ScalerSpec> scaler;        ///< a, or a_+ for the squeeze
  std::optional<ScalerSpec> scaler_minus;  ///< a_- for the squeeze and signed sups
  std::optional<ConvexWeightSpec> weight;
  std::optional<double> expected;          ///< closed-form limit of the forcing-side average
  std::optional<double> declared_lambda;   ///< may be +inf
  std::optional<double> declared_lambda2;  ///< may be +inf
  std::optional<std::pair<double, double>> band;
  bool expect_divergent = false;

  std::int64_t max_horizon() const { return horizons.empty() ? 0 : *std::max_element(horizons.begin(), horizons.end()); }

  std::string canonical() const {
    std::string s = "scenario(name=" + name + ";theorem=" + theorem + ";" + kernel.canonical() + ";" + f.canonical() +
                    ";" + forcing.with_seed(0).canonical() + ";xi=" + format_double(xi) +
                    ";mode=" + std::string(to_string(mode)) + ";overflow_limit=" + format_double(overflow_limit) +
                    ";horizons=[";
    for (std::size_t i = 0; i < horizons.size(); ++i) s += (i ? "," : "") + std::to_string(horizons[i]);
    s += "];seeds=[";
    for (std::size_t i = 0; i < seeds.size(); ++i) s += (i ? "," : "") + std::to_string(seeds[i]);
    s += "];tol=" + format_double(tolerance) + ";tail_fraction=" + format_double(tail_fraction);
    if (scaler) s += ";scaler=" + scaler->canonical();
    if (scaler_minus) s += ";scaler_minus=" + scaler_minus->canonical();
    if (weight) s += ";weight=" + weight->canonical();
    if (expected) s += ";expected=" + format_double(*expected);
    if (declared_lambda) s += ";lambda=" + format_double(*declared_lambda);
    if (declared_lambda2) s += ";lambda2=" + format_double(*declared_lambda2);
    if (band) s += ";band=[" + format_double(band->first) + "," + format_double(band->second) + "]";
    if (expect_divergent) s += ";divergent";
    return s + ")";
  }

  std::string fingerprint() const { return hex64(fnv1a64(canonical())); }

  void validate() const {
    if (name.empty()) throw ArgumentError("scenario needs a name");
    if (!is_theorem_id(theorem)) throw ArgumentError("unknown theorem id '" + theorem + "' in scenario " + name);
    if (horizons.empty()) throw ArgumentError("scenario " + name + " has no horizons");
    if (!std::is_sorted(horizons.begin(), horizons.end()) || horizons.front() < 1)
      throw ArgumentError("scenario " + name + " horizons must be positive and increasing");
    if (seeds.empty()) throw ArgumentError("scenario " + name + " has no seeds");
    if (!(tolerance >= 0.0)) throw ArgumentError("scenario " + name + " tolerance must be nonnegative");
  }
};

struct TheoremCheck {
  std::string scenario;
  std::string theorem;
  std::string fingerprint;
  std::vector<std::int64_t> horizons;
  std::vector<std::uint64_t> seeds;
  std::string statistic;
  std::vector<double> statistics;  ///< median over seeds, one per horizon
  double tolerance = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;
  std::vector<std::pair<std::string, double>> extras;
};

/// Each horizon's statistic must be no worse than the previous one, up to a
/// slack of 20% of max(previous, tolerance).
inline bool ladder_improves(const std::vector<double>& stats, double tol) {
  for (std::size_t i = 1; i < stats.size(); ++i)
    if (!(stats[i] <= stats[i - 1] + kLadderSlack * std::max(stats[i - 1], tol))) return false;
  return true;
}

/// Deterministic per-scenario seeds derived from one user-supplied value.
inline std::vector<std::uint64_t> expand_seed(std::uint64_t base, const std::string& scenario, std::size_t count) {
  std::vector<std::uint64_t> out;
  const std::uint64_t salt = fnv1a64(scenario);
  for (std::size_t i = 0; i < count; ++i) out.push_back(rng::splitmix64(base ^ rng::splitmix64(salt + i)));
  return out;
}

inline SimConfig scenario_sim_config(const Scenario& sc, std::uint64_t seed, std::int64_t horizon) {
  SimConfig cfg;
  cfg.kernel = sc.kernel;
  cfg.f = sc.f;
  cfg.forcing = generate(sc.forcing.with_seed(seed), horizon, sc.overflow_limit);
  cfg.xi = cfg.forcing.initial_state.value_or(sc.xi);
  cfg.horizon = horizon;
  cfg.mode = sc.mode;
  cfg.overflow_limit = sc.overflow_limit;
  return cfg;
}

inline Path simulate_scenario(const Scenario& sc, std::uint64_t seed) {
  return simulate(scenario_sim_config(sc, seed, sc.max_horizon()));
}

namespace detail {

struct Outcome {
  std::string statistic;
  std::vector<double> stats;
  bool final_ok = true;  ///< overrides the default "final <= tol" when custom_final is set
  bool custom_final = false;
  bool extra_ok = true;
  bool use_ladder = true;
  bool regime_ok = true;
  std::string detail;
  std::vector<std::pair<std::string, double>> extras;
};

inline double dev1(double r) { return std::abs(r - 1.0); }

// Running maxima of a path, queried at arbitrary horizons.
struct Maxima {
  MaxTrack xabs, xplus, xminus, habs, hplus, hminus;
  explicit Maxima(const Path& p)
      : xabs(running_max_abs(p.x)),
        xplus(running_signed_max(p.x, Side::Plus)),
        xminus(running_signed_max(p.x, Side::Minus)),
        habs(running_max_abs(p.h)),
        hplus(running_signed_max(p.h, Side::Plus)),
        hminus(running_signed_max(p.h, Side::Minus)) {}
};

// Per-horizon median of a per-(seed, horizon) statistic.
template <class Fn>
std::vector<double> ladder_medians(const Scenario& sc, const std::vector<Path>& paths, Fn stat) {
  std::vector<double> out;
  for (std::int64_t N : sc.horizons) {
    std::vector<double> vals;
    for (const auto& p : paths) vals.push_back(stat(p, N));
    out.push_back(median(vals));
  }
  return out;
}

inline double xstar_creep(const Path& p, std::int64_t N) {
  double a = 0.0, b = 0.0;
  for (std::int64_t n = 0; n <= N; ++n) {
    b = std::max(b, std::abs(p.x[n]));
    if (n == N / 2) a = b;
  }
  return b > 0.0 ? (b - a) / b : 0.0;
}

inline Outcome check_bounded(const Scenario& sc, const std::vector<Path>& paths) {
  Outcome o;
  if (sc.theorem == "bounded-a") {
    o.statistic = "relative growth of x* over the final half";
    o.stats = ladder_medians(sc, paths, xstar_creep);
    const double l1 = sc.kernel.l1();
    const double eps = l1 > 0.0 ? 0.5 / l1 : 1.0;
    const double F = sc.f.sublinearity_bound(eps);
    std::int64_t worst = 0;
    double max_ratio = 0.0;
    for (const auto& p : paths) {
      double xs = std::abs(p.x[0]), hs = 0.0;
      for (std::int64_t n = 1; n <= p.horizon(); ++n) {
        xs = std::max(xs, std::abs(p.x[n]));
        hs = std::max(hs, std::abs(p.h[n]));
        const double bound = (std::abs(p.x[0]) + l1 * F + hs) / (1.0 - eps * l1);
        max_ratio = std::max(max_ratio, xs / bound);
        if (xs > bound * (1.0 + 1e-12)) ++worst;
      }
    }
    o.extras.push_back({"max_xstar_over_bound", max_ratio});
    o.extras.push_back({"bound_violations", static_cast<double>(worst)});
    o.extra_ok = worst == 0;
    if (!o.extra_ok) o.detail = "explicit x* bound violated";
  } else {
    o.statistic = "1 / x*(N)";
    o.stats = ladder_medians(sc, paths, [](const Path& p, std::int64_t N) {
      double m = 0.0;
      for (std::int64_t n = 0; n <= N; ++n) m = std::max(m, std::abs(p.x[n]));
      return m > 0.0 ? 1.0 / m : std::numeric_limits<double>::infinity();
    });
    o.use_ladder = false;
    for (std::size_t i = 1; i < o.stats.size(); ++i)
      if (!(o.stats[i] < o.stats[i - 1])) o.extra_ok = false;
    if (!o.extra_ok) o.detail = "x* did not grow strictly along the horizon ladder";
  }
  return o;
}

inline Outcome check_max_ratio(const Scenario& sc, const std::vector<Path>& paths) {
  Outcome o;
  o.statistic = "|x*(N)/H*(N) - 1|";
  o.stats = ladder_medians(sc, paths, [](const Path& p, std::int64_t N) {
    double xs = 0.0, hs = 0.0;
    for (std::int64_t n = 0; n <= N; ++n) xs = std::max(xs, std::abs(p.x[n]));
    for (std::int64_t n = 1; n <= N; ++n) hs = std::max(hs, std::abs(p.h[n]));
    return dev1(xs / hs);
  });
  return o;
}

// Largest deviation from 1 among the four record-time ratios, over the
// record times that fall in the final window.
inline double coupling_deviation(const Path& p, std::int64_t N) {
  const Path q = p.prefix(N);
  const MaxTrack tx = running_max_abs(q.x);
  const MaxTrack th = running_max_abs(q.h);
  const std::int64_t from = N - tail_count(N, kSummaryFraction) + 1;
  double worst = 0.0;
  auto eval = [&](std::int64_t n) {
    const std::int64_t a = th.argmax_at(n), b = tx.argmax_at(n);
    const double x_th = std::abs(q.x[a]), h_th = std::abs(q.h[a]), x_tx = std::abs(q.x[b]);
    const double h_tx = b >= 1 ? std::abs(q.h[b]) : std::numeric_limits<double>::quiet_NaN();
    for (double r : {x_th / h_th, x_tx / x_th, x_tx / h_tx, h_tx / h_th}) worst = std::max(worst, std::isnan(r) ? INFINITY : dev1(r));
  };
  eval(from);
  for (std::int64_t n = from + 1; n <= N; ++n)
    if (tx.argmax_at(n) == n || th.argmax_at(n) == n) eval(n);
  return worst;
}

inline Outcome check_argmax_coupling(const Scenario& sc, const std::vector<Path>& paths) {
  Outcome o;
  o.statistic = "max |ratio - 1| over the four record-time ratios, final window";
  o.stats = ladder_medians(sc, paths, coupling_deviation);
  return o;
}

inline Outcome check_growth(const Scenario& sc, const std::vector<Path>& paths) {
  Outcome o;
  o.statistic = "sup |x(n)/H(n) - 1| over the final window";
  o.stats = ladder_medians(sc, paths, [](const Path& p, std::int64_t N) {
    double worst = 0.0;
    for (std::int64_t n = N - tail_count(N, kSummaryFraction) + 1; n <= N; ++n) worst = std::max(worst, dev1(p.x[n] / p.h[n]));
    return worst;
  });
  if (sc.theorem == "growth-down") {
    for (const auto& p : paths)
      if (!(p.h[p.horizon()] < 0.0)) o.regime_ok = false;
  } else {
    for (const auto& p : paths)
      if (!(p.h[p.horizon()] > 0.0)) o.regime_ok = false;
  }
  if (!o.regime_ok) o.detail = "forcing does not have the declared direction";
  return o;
}

inline Outcome check_modulated_growth(const Scenario& sc, const std::vector<Path>& paths) {
  Outcome o;
  const auto* pe = std::get_if<PeriodicExponential>(&sc.forcing.variant());
  if (!pe) throw ArgumentError("modulated-growth scenario " + sc.name + " needs a periodic-exponential forcing");
  const ScalerSpec a = ScalerSpec::exponential(pe->a);
  o.statistic = "sup |x(n)/e^{an} - pi(n)| over the final window";
  o.stats = ladder_medians(sc, paths, [&](const Path& p, std::int64_t N) {
    const std::int64_t from = N - tail_count(N, kSummaryFraction) + 1;
    RealSeq xs{from, {}}, lam{from, {}};
    for (std::int64_t n = from; n <= N; ++n) {
      xs.values.push_back(p.x[n]);
      lam.values.push_back(pe->pattern[static_cast<std::size_t>(n) % pe->pattern.size()]);
    }
    return final_window_sup(lambda_a_residual(xs, a, lam), xs.size());
  });
  return o;
}

inline bool regime_matches(double declared, const LambdaEstimate& e) {
  if (std::isinf(declared)) return e.regime == LimitRegime::PlusInfinity;
  return e.regime == LimitRegime::Finite && std::abs(e.final - declared) <= kRegimeTolerance;
}

inline Outcome check_signed(const Scenario& sc, const std::vector<Path>& paths) {
  Outcome o;
  const double l1 = sc.kernel.l1();
  const std::string& id = sc.theorem;

  // Regime preconditions, measured on the forcing at the largest horizon.
  std::vector<double> lam, lam2;
  bool lam_ok = true, lam2_ok = true;
  for (const auto& p : paths) {
    if (sc.declared_lambda) {
      const auto e = estimate_lambda(p.h);
      lam.push_back(e.final);
      lam_ok = lam_ok && regime_matches(*sc.declared_lambda, e);
    }
    if (sc.declared_lambda2) {
      const auto e = estimate_lambda2(p.h, sc.f);
      lam2.push_back(e.final);
      lam2_ok = lam2_ok && regime_matches(*sc.declared_lambda2, e);
    }
  }
  if (!lam.empty()) o.extras.push_back({"lambda_hat", median(lam)});
  if (!lam2.empty()) o.extras.push_back({"lambda2_hat", median(lam2)});
  if (!sc.declared_lambda) {
    o.regime_ok = false;
    o.detail = "scenario does not declare its lambda regime";
  } else if (!lam_ok || !lam2_ok) {
    o.regime_ok = false;
    o.detail = "measured regime differs from the declared one";
  }

  const double l2 = sc.declared_lambda2.value_or(std::numeric_limits<double>::quiet_NaN());
  auto stat = [&](const Path& p, std::int64_t N) -> double {
    const Maxima m(p.prefix(N));
    const auto i = static_cast<std::size_t>(N);
    const double xp = m.xplus.values.values[i], xm = m.xminus.values.values[i], xa = m.xabs.values.values[i];
    const double hp = m.hplus.values.values[i - 1], hm = m.hminus.values.values[i - 1];
    if (id == "signedfluc-lambda-lt-1") return std::max(dev1(xp / hp), dev1(xa / hp));
    if (id == "signedfluc-lambda-gt-1") return std::max(dev1(xm / hm), dev1(xa / hm));
    if (id == "signedfluc-lambda-eq-1" || id == "signedfluc2-lambda-finite")
      return std::max(dev1(xp / hp), dev1(xm / hm));
    if (id == "signedfluc2-lambda-zero") return std::max(dev1(xp / hp), std::max(0.0, xm) / hp);
    if (id == "signedfluc2-lambda-inf") return std::max(std::max(0.0, xp) / hm, dev1(xm / hm));
    // signedfluct-lambda2
    if (std::isinf(l2)) return std::max(dev1(xp / hp), dev1(xm / hm));
    if (l2 == 0.0) return std::max(dev1(xp / hp), std::max(0.0, xm / sc.f(hp) - l1));
    const double r = xm / hm;
    const double hi = 1.0 + l1 / l2;
    const double lo = l2 > l1 ? 1.0 - l1 / l2 : -std::numeric_limits<double>::infinity();
    return std::max({dev1(xp / hp), r - hi, lo - r, 0.0});
  };
  if (id == "signedfluct-lambda2") {
    if (!sc.declared_lambda2) {
      o.regime_ok = false;
      o.detail = "scenario does not declare its lambda2 regime";
    }
    o.statistic = std::isinf(l2)   ? "max(|x*+/H*+ - 1|, |x*-/H*- - 1|)"
                  : l2 == 0.0      ? "max(|x*+/H*+ - 1|, excess of x*-/f(H*+) over |k|_1)"
                                   : "max(|x*+/H*+ - 1|, distance of x*-/H*- outside 1 -+ |k|_1/lambda2)";
    if (std::isfinite(l2) && l2 > 0.0 && !lam2.empty()) {
      const double rel = std::abs(median(lam2) / l2 - 1.0);
      o.extras.push_back({"lambda2_relative_error", rel});
      if (rel > 0.1) {
        o.extra_ok = false;
        o.detail = "lambda2 estimate more than 10% from the declared value";
      }
    }
  } else {
    o.statistic = "signed running-max ratio deviation";
  }
  o.stats = ladder_medians(sc, paths, stat);

  // Paths built from a prescribed target must reproduce it exactly.
  if (const auto* c = std::get_if<ConstructedAlternating>(&sc.forcing.variant())) {
    std::int64_t mismatches = 0;
    for (const auto& p : paths) {
      const RealSeq y = constructed_target(*c, p.horizon());
      for (std::int64_t n = 0; n <= p.horizon(); ++n) mismatches += p.x[n] != y[n];
    }
    o.extras.push_back({"path_identity_mismatches", static_cast<double>(mismatches)});
    if (mismatches) {
      o.extra_ok = false;
      o.detail = "simulated path differs from the prescribed target";
    }
  }
  return o;
}

inline double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double xb = 0.0, yb = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xb += xs[i];
    yb += ys[i];
  }
  xb /= static_cast<double>(xs.size());
  yb /= static_cast<double>(xs.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - xb) * (ys[i] - yb);
    sxx += (xs[i] - xb) * (xs[i] - xb);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

inline Outcome check_aux_limsup(const Scenario& sc, const std::vector<Path>& paths) {
  Outcome o;
  if (!sc.scaler) throw ArgumentError("limsup scenario " + sc.name + " needs a scaler");
  const ScalerSpec& a = *sc.scaler;
  const double tf = sc.tail_fraction;

  if (sc.theorem == "limsup-rho") {
    o.statistic = "|rho_hat(x) - rho_hat(H)|";
    o.stats = ladder_medians(sc, paths, [&](const Path& p, std::int64_t N) {
      const Path q = p.prefix(N);
      return std::abs(tail_sup_ratio(q.x, a, tf) - tail_sup_ratio(q.h, a, tf));
    });
    std::vector<double> rx, rh;
    for (const auto& p : paths) {
      rx.push_back(tail_sup_ratio(p.x, a, tf));
      rh.push_back(tail_sup_ratio(p.h, a, tf));
    }
    const double mx = median(rx);
    o.extras.push_back({"rho_hat_x", mx});
    o.extras.push_back({"rho_hat_H", median(rh)});
    if (sc.band && !(mx >= sc.band->first && mx <= sc.band->second)) {
      o.extra_ok = false;
      o.detail = "rho_hat(x) outside its band";
    }
  } else if (sc.theorem == "limsup-signed") {
    const ScalerSpec& am = sc.scaler_minus ? *sc.scaler_minus : a;
    o.statistic = "max(|rho+_hat(x) - rho+_hat(H)|, |rho-_hat(x) - rho-_hat(H)|)";
    o.stats = ladder_medians(sc, paths, [&](const Path& p, std::int64_t N) {
      const Path q = p.prefix(N);
      return std::max(std::abs(tail_sup_ratio(q.x, a, tf, SupKind::Pos) - tail_sup_ratio(q.h, a, tf, SupKind::Pos)),
                      std::abs(tail_sup_ratio(q.x, am, tf, SupKind::Neg) - tail_sup_ratio(q.h, am, tf, SupKind::Neg)));
    });
    std::vector<double> rp, rm;
    for (const auto& p : paths) {
      rp.push_back(tail_sup_ratio(p.x, a, tf, SupKind::Pos));
      rm.push_back(tail_sup_ratio(p.x, am, tf, SupKind::Neg));
    }
    o.extras.push_back({"rho_plus_hat_x", median(rp)});
    o.extras.push_back({"rho_minus_hat_x", median(rm)});
  } else {  // limsup-squeeze
    if (!sc.scaler_minus) throw ArgumentError("limsup-squeeze scenario " + sc.name + " needs scaler_minus");
    const auto* ht = std::get_if<HeavyTailIid>(&sc.forcing.variant());
    if (!ht) throw ArgumentError("limsup-squeeze scenario " + sc.name + " needs a heavytail forcing");
    const double target = 1.0 / ht->alpha;
    o.statistic = "|sup over the final decade of log|x(n)|/log n - 1/alpha|";
    o.stats = ladder_medians(sc, paths, [&](const Path& p, std::int64_t N) {
      return std::abs(log_exponent_sup(p.x.prefix(N), std::max<std::int64_t>(2, N / 10)) - target);
    });
    std::vector<double> logN;
    for (auto N : sc.horizons) logN.push_back(std::log10(static_cast<double>(N)));
    std::vector<double> sp, sm;
    for (const auto& p : paths) {
      std::vector<double> lp, lm;
      for (auto N : sc.horizons) {
        const Path q = p.prefix(N);
        lp.push_back(std::log10(tail_sup_ratio(q.x, a, tf)));
        lm.push_back(std::log10(tail_sup_ratio(q.x, *sc.scaler_minus, tf)));
      }
      sp.push_back(fit_slope(logN, lp));
      sm.push_back(fit_slope(logN, lm));
    }
    const double slope_plus = median(sp), slope_minus = median(sm);
    o.extras.push_back({"trend_slope_a_plus", slope_plus});
    o.extras.push_back({"trend_slope_a_minus", slope_minus});
    if (!(slope_plus <= -kTrendDeadZone && slope_minus >= kTrendDeadZone)) {
      o.extra_ok = false;
      o.detail = "limsup proxies do not trend to 0 under a_+ and to infinity under a_-";
    }
  }
  return o;
}

inline Outcome check_phi_moments(const Scenario& sc, const std::vector<Path>& paths) {
  Outcome o;
  if (!sc.weight) throw ArgumentError("moment scenario " + sc.name + " needs a weight");
  const ConvexWeightSpec& w = *sc.weight;

  // Track per seed at the largest horizon; overflow of phi counts as divergence.
  std::vector<std::optional<RealSeq>> tracks;
  std::int64_t overflows = 0;
  for (const auto& p : paths) {
    try {
      tracks.emplace_back(phi_time_average(p.x, w));
    } catch (const OverflowError&) {
      tracks.emplace_back(std::nullopt);
      ++overflows;
    }
  }
  o.extras.push_back({"phi_overflows", static_cast<double>(overflows)});

  if (sc.expect_divergent) {
    o.statistic = "decade-window growth slope of the phi time average of x";
    o.use_ladder = false;
    o.custom_final = true;
    std::vector<double> last_slopes;
    int rising = 0;
    for (std::int64_t N : sc.horizons) {
      std::vector<double> slopes;
      rising = 0;
      for (const auto& t : tracks) {
        if (!t) {
          slopes.push_back(std::numeric_limits<double>::infinity());
          ++rising;
          continue;
        }
        const auto d = detect_divergence(t->prefix(N));
        slopes.push_back(d.slope);
        rising += d.divergent;
      }
      o.stats.push_back(median(slopes));
    }
    o.extras.push_back({"divergent_seeds", static_cast<double>(rising)});
    o.final_ok = o.stats.back() >= kDivergenceSlope && 2 * rising > static_cast<int>(paths.size());
    if (!o.final_ok) o.detail = "divergence detector did not fire";
    return o;
  }

  if (overflows) {
    o.final_ok = false;
    o.custom_final = true;
    o.detail = "phi time average overflowed in the convergent regime";
  }
  o.statistic = "relative spread of the phi time average of x over the final window";
  for (std::int64_t N : sc.horizons) {
    std::vector<double> drift;
    for (const auto& t : tracks) {
      if (!t) continue;
      const auto s = summarize_tail(t->prefix(N));
      drift.push_back((s.max - s.min) / s.mean);
    }
    o.stats.push_back(median(drift));
  }
  std::vector<double> ax, ah;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (tracks[i]) ax.push_back(tracks[i]->values.back());
    ah.push_back(phi_time_average(paths[i].h, w).values.back());
  }
  o.extras.push_back({"A_x", median(ax)});
  o.extras.push_back({"A_H", median(ah)});
  if (sc.expected) {
    const double rel = std::abs(median(ah) / *sc.expected - 1.0);
    o.extras.push_back({"A_H_relative_error", rel});
    if (rel > sc.tolerance) {
      o.extra_ok = false;
      o.detail = "forcing-side average is off its closed-form value";
    }
  }
  return o;
}

}  // namespace detail

/// Run one scenario across its seeds and horizon ladder.
inline TheoremCheck run_scenario(const Scenario& sc) {
  sc.validate();
  TheoremCheck c;
  c.scenario = sc.name;
  c.theorem = sc.theorem;
  c.fingerprint = sc.fingerprint();
  c.horizons = sc.horizons;
  c.seeds = sc.seeds;
  c.tolerance = sc.tolerance;

  std::vector<Path> paths;
  try {
    for (auto seed : sc.seeds) paths.push_back(simulate_scenario(sc, seed));
  } catch (const OverflowError& e) {
    c.statistic = "divergence";
    c.extras.push_back({"overflow_index", static_cast<double>(e.index())});
    c.verdict = sc.expect_divergent ? Verdict::Pass : Verdict::Fail;
    c.detail = std::string("overflow: ") + e.what();
    return c;
  }

  detail::Outcome o;
  const std::string& id = sc.theorem;
  try {
    if (id == "bounded-a" || id == "bounded-b") o = detail::check_bounded(sc, paths);
    else if (id == "maxratio") o = detail::check_max_ratio(sc, paths);
    else if (id == "argmax-coupling") o = detail::check_argmax_coupling(sc, paths);
    else if (id == "growth-up" || id == "growth-down") o = detail::check_growth(sc, paths);
    else if (id == "modulated-growth") o = detail::check_modulated_growth(sc, paths);
    else if (id.rfind("signedfluc", 0) == 0) o = detail::check_signed(sc, paths);
    else if (id.rfind("limsup", 0) == 0) o = detail::check_aux_limsup(sc, paths);
    else o = detail::check_phi_moments(sc, paths);
  } catch (const OverflowError&) {
    throw;
  } catch (const Error& e) {
    // Horizons too short for the statistic, e.g. after a CLI rescale.
    c.verdict = Verdict::Inconclusive;
    c.detail = std::string("statistic undefined: ") + e.what();
    return c;
  }

  c.statistic = o.statistic;
  c.statistics = o.stats;
  c.extras = o.extras;
  c.detail = o.detail;

  const bool has_nan = std::any_of(o.stats.begin(), o.stats.end(), [](double v) { return std::isnan(v); });
  if (!o.regime_ok || has_nan) {
    c.verdict = Verdict::Inconclusive;
    if (c.detail.empty()) c.detail = "statistic undefined";
    return c;
  }
  const bool final_ok = o.custom_final ? o.final_ok : o.stats.back() <= sc.tolerance;
  const bool ladder_ok = !o.use_ladder || ladder_improves(o.stats, sc.tolerance);
  c.verdict = final_ok && ladder_ok && o.extra_ok ? Verdict::Pass : Verdict::Fail;
  if (c.detail.empty()) {
    if (!final_ok) c.detail = "final-horizon statistic outside tolerance";
    else if (!ladder_ok) c.detail = "no improvement along the horizon ladder";
  }
  return c;
}

struct SuiteReport {
  std::vector<TheoremCheck> checks;

  bool any_fail() const {
    return std::any_of(checks.begin(), checks.end(), [](const auto& c) { return c.verdict == Verdict::Fail; });
  }
  std::vector<std::string> inconclusive() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (c.verdict == Verdict::Inconclusive) out.push_back(c.scenario);
    return out;
  }
};

/// Runs every scenario; the report is ordered by scenario name.
inline SuiteReport run_suite(const std::vector<Scenario>& scenarios) {
  for (const auto& s : scenarios) s.validate();
  SuiteReport r;
  for (const auto& s : scenarios) r.checks.push_back(run_scenario(s));
  std::stable_sort(r.checks.begin(), r.checks.end(),
                   [](const TheoremCheck& a, const TheoremCheck& b) { return a.scenario < b.scenario; });
  return r;
}

// ---------------------------------------------------------------------------
// Shipped scenarios
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::uint64_t> seed_range(std::uint64_t count) {
  std::vector<std::uint64_t> s;
  for (std::uint64_t i = 1; i <= count; ++i) s.push_back(i);
  return s;
}

inline Scenario make(std::string name, std::string theorem, ForcingVariant forcing, std::vector<std::int64_t> horizons,
                     double tol, std::uint64_t seeds = 0) {
  Scenario s;
  s.name = std::move(name);
  s.theorem = std::move(theorem);
  s.forcing = ForcingSpec(std::move(forcing), 0);
  s.horizons = std::move(horizons);
  s.tolerance = tol;
  if (seeds) s.seeds = seed_range(seeds);
  return s;
}

}  // namespace detail

/// One scenario per theorem id (two where a dichotomy has both sides), with
/// tolerances calibrated from the S*/H* error budget of each setup.
inline std::vector<Scenario> default_suite() {
  using detail::make;
  const std::vector<std::int64_t> L3{1000, 10000, 100000};
  const std::vector<std::int64_t> L6{10000, 100000, 1000000};
  const auto small_kernel = KernelSpec::geometric(0.25, 0.5);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Scenario> out;

  // x* settles under bounded forcing; budget (|xi| + |k|_1 F + H*)/(1 - eps|k|_1) = 6.
  out.push_back(make("bounded-a", "bounded-a", BoundedOscillation{1.0}, L3, 1e-3));
  out.push_back(make("bounded-b", "bounded-b", GaussianIid{1.0}, L3, 0.5, 5));

  // S*/H* ~ 2 H*^{alpha-1} with alpha = 0.3.
  auto mr = make("maxratio", "maxratio", HeavyTailIid{1.5}, L3, 0.05, 5);
  mr.f = NonlinearitySpec::signed_power(0.3);
  out.push_back(mr);
  auto ac = mr;
  ac.name = ac.theorem = "argmax-coupling";
  out.push_back(ac);

  // Residual ~ 2 N^{0.6 - 1.2}.
  out.push_back(make("growth-up", "growth-up", MonotonePower{1.2, 1.0}, L3, 0.01));
  out.push_back(make("growth-down", "growth-down", MonotonePower{1.2, -1.0}, L3, 0.01));

  // Residual ~ e^{-(1-alpha) a n}.
  out.push_back(make("modulated-growth", "modulated-growth",
                     PeriodicExponential{0.05, {1.0, 1.5, 2.0, 1.25, 1.75, 1.1, 1.9}}, {500, 1000, 2000}, 1e-3));

  // Deterministic alternating forcings with prescribed lambda; error ~ (2/3) N^{-1/2}.
  auto signed_case = [&](const std::string& id, SignedAlternating h, double lambda) {
    auto s = make(id, id, h, L3, 0.01);
    s.declared_lambda = lambda;
    out.push_back(s);
  };
  signed_case("signedfluc-lambda-lt-1", {1.0, 1.0, 0.5, 1.0}, 0.5);
  signed_case("signedfluc-lambda-gt-1", {0.5, 1.0, 1.0, 1.0}, 2.0);
  signed_case("signedfluc-lambda-eq-1", {1.0, 1.0, 1.0, 1.0}, 1.0);
  signed_case("signedfluc2-lambda-finite", {1.0, 1.0, 0.5, 1.0}, 0.5);
  signed_case("signedfluc2-lambda-zero", {1.0, 1.0, 1.0, 0.5}, 0.0);
  signed_case("signedfluc2-lambda-inf", {1.0, 0.5, 1.0, 1.0}, inf);

  // Constructed forcing, lambda = 0. With mu_- = 0.2 the kernel sets
  // lambda2 = sum_j k(2j) = 4/3; with mu_- = 0.7, lambda2 = +inf and the
  // x*_-/H*_- error decays like (4/3) N^{-0.2}.
  const auto geo = KernelSpec::geometric(1.0, 0.5);
  auto lf = make("signedfluct-lambda2-finite", "signedfluct-lambda2", ConstructedAlternating{1.0, 0.2, 0.5, geo}, L3, 0.1);
  lf.xi = 1.0;
  lf.declared_lambda = 0.0;
  lf.declared_lambda2 = geo.even_index_sum();
  out.push_back(lf);
  auto li = make("signedfluct-lambda2-inf", "signedfluct-lambda2", ConstructedAlternating{1.0, 0.7, 0.5, geo}, L3, 0.15);
  li.xi = 1.0;
  li.declared_lambda = 0.0;
  li.declared_lambda2 = inf;
  out.push_back(li);
  auto lz = make("signedfluct-lambda2-zero", "signedfluct-lambda2", SignedAlternating{1.0, 1.0, 1.0, 0.2}, L3, 0.1);
  lz.declared_lambda = 0.0;
  lz.declared_lambda2 = 0.0;
  out.push_back(lz);

  // Gaussian maxima grow like sqrt(2 log n); a light kernel keeps the
  // additive S(n) small next to that.
  auto rho = make("limsup-rho", "limsup-rho", GaussianIid{1.0}, L6, 0.1, 20);
  rho.kernel = small_kernel;
  rho.scaler = ScalerSpec::sqrt_log();
  rho.band = {{0.85, 1.1}};
  out.push_back(rho);

  auto sq = make("limsup-squeeze", "limsup-squeeze", HeavyTailIid{2.0}, {100, 1000, 10000, 100000, 1000000}, 0.1, 20);
  sq.scaler = ScalerSpec::power(0.6);
  sq.scaler_minus = ScalerSpec::power(0.4);
  out.push_back(sq);

  auto ls = make("limsup-signed", "limsup-signed", GaussianIid{1.0}, L6, 0.1, 20);
  ls.kernel = small_kernel;
  ls.scaler = ScalerSpec::sqrt_log();
  ls.scaler_minus = ScalerSpec::sqrt_log();
  out.push_back(ls);

  // phi-moment dichotomies: E e^{a H^2} = (1 - 2a)^{-1/2} for a < 1/2, and
  // E|H|^p = alpha/(alpha - p) for p < alpha under the exact Pareto law.
  // The exponential weight amplifies the additive S(n), so it gets the light kernel.
  auto eg = make("ergodic-phi", "ergodic-phi", GaussianIid{1.0}, L6, 0.05, 10);
  eg.kernel = small_kernel;
  eg.weight = ConvexWeightSpec::gaussian_exp(0.3);
  eg.expected = 1.0 / std::sqrt(0.4);
  out.push_back(eg);
  auto egd = make("ergodic-phi-divergent", "ergodic-phi", GaussianIid{1.0}, L6, kDivergenceSlope, 10);
  egd.kernel = small_kernel;
  egd.weight = ConvexWeightSpec::gaussian_exp(0.7);
  egd.expect_divergent = true;
  out.push_back(egd);

  auto pm = make("pth-moment", "pth-moment", HeavyTailIid{2.0}, L6, 0.1, 10);
  pm.weight = ConvexWeightSpec::power(1.0);
  pm.expected = 2.0;
  out.push_back(pm);
  auto pmd = make("pth-moment-divergent", "pth-moment", HeavyTailIid{2.0}, L6, kDivergenceSlope, 10);
  pmd.weight = ConvexWeightSpec::power(2.5);
  pmd.expect_divergent = true;
  out.push_back(pmd);

  return out;
}

inline std::optional<Scenario> find_default_scenario(const std::string& name) {
  for (auto& s : default_suite())
    if (s.name == name) return s;
  return std::nullopt;
}

}  // namespace volterra
