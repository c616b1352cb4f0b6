#pragma once

// Solution paths of x(n+1) = H(n+1) + sum_{j=0}^{n} k(n-j) f(x(j)), the
// Volterra terms S(n) and the inverse map from a target path to its forcing.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "volterra/canonical.hpp"
#include "volterra/errors.hpp"
#include "volterra/seqcore.hpp"

namespace volterra {

enum class SolverMode { Reference, Auto };

inline std::string_view to_string(SolverMode m) { return m == SolverMode::Reference ? "reference" : "auto"; }

inline SolverMode solver_mode_from_string(std::string_view s) {
  if (s == "reference") return SolverMode::Reference;
  if (s == "auto") return SolverMode::Auto;
  throw ArgumentError("unknown solver mode '" + std::string(s) + "'");
}

/// A realized forcing H(1..N). `correction` is an optional low-order part
/// added after H(n) + S(n-1); it is only populated by recover_forcing, where
/// it makes the round trip exact in floating point.
struct ForcingSequence {
  std::string fingerprint;
  RealSeq values{1, {}};
  std::vector<double> correction;
  std::uint64_t seed = 0;
  std::optional<double> initial_state;

  std::int64_t size() const noexcept { return values.size(); }
  double correction_at(std::int64_t n) const {
    const auto i = static_cast<std::size_t>(n - 1);
    return i < correction.size() ? correction[i] : 0.0;
  }

  /// Wrap raw values H(1), H(2), ... (no correction).
  static ForcingSequence from_values(std::vector<double> h, std::string fingerprint = {}) {
    ForcingSequence out;
    if (fingerprint.empty()) {
      std::uint64_t d = fnv1a64("forcing.values");
      for (double v : h) d = fnv1a64(format_double(v) + ";", d);
      fingerprint = hex64(d);
    }
    out.fingerprint = std::move(fingerprint);
    out.values = RealSeq::from_one(std::move(h));
    return out;
  }
};

// ---------------------------------------------------------------------------
// Volterra accumulator
// ---------------------------------------------------------------------------

/// Streams f(x(0)), f(x(1)), ... and returns S(0), S(1), ... Reference mode
/// sums every term in ascending j. Auto mode uses the O(1) recurrence for
/// geometric kernels and a window of length L for the rest, where L is the
/// support of a finite kernel or the point at which the l1 tail drops below
/// trunc_tol.
class VolterraAccumulator {
 public:
  VolterraAccumulator(const KernelSpec& kernel, SolverMode mode, std::int64_t horizon_hint = 0)
      : kernel_(kernel) {
    if (kernel.is_null()) {
      strategy_ = Strategy::Null;
    } else if (mode == SolverMode::Auto && kernel.is_geometric()) {
      strategy_ = Strategy::Recurrence;
      const auto& g = std::get<GeometricKernel>(kernel.variant());
      c_ = g.c;
      rho_ = g.rho;
    } else {
      strategy_ = Strategy::Window;
      window_ = mode == SolverMode::Auto ? kernel.window(kernel.trunc_tol()) : detail::kMaxWindow;
      if (mode == SolverMode::Auto && kernel.is_finite()) window_ = kernel.window(0.0);
      if (window_ < detail::kMaxWindow) tail_ = kernel.tail_bound(window_);
    }
    if (horizon_hint > 0) {
      fx_.reserve(static_cast<std::size_t>(horizon_hint + 1));
      coeff_.reserve(static_cast<std::size_t>(std::min<std::int64_t>(window_, horizon_hint + 1)));
    }
  }

  /// Append f(x(n)) and return S(n).
  double push(double fx) {
    const auto n = static_cast<std::int64_t>(fx_.size());
    fx_.push_back(fx);
    switch (strategy_) {
      case Strategy::Null:
        return 0.0;
      case Strategy::Recurrence:
        s_ = n == 0 ? c_ * fx : rho_ * s_ + c_ * fx;
        return s_;
      case Strategy::Window:
        break;
    }
    if (n < window_ && static_cast<std::int64_t>(coeff_.size()) <= n) coeff_.push_back(kernel_(n));
    const std::int64_t lo = n - window_ + 1 > 0 ? n - window_ + 1 : 0;
    if (lo > 0) dropped_max_ = std::max(dropped_max_, std::abs(fx_[static_cast<std::size_t>(lo - 1)]));
    double s = 0.0;
    for (std::int64_t j = lo; j <= n; ++j)
      s += coeff_[static_cast<std::size_t>(n - j)] * fx_[static_cast<std::size_t>(j)];
    return s;
  }

  /// Certified bound on the truncation error of the most recent S(n).
  double truncation_error() const noexcept { return tail_ * dropped_max_; }

  std::int64_t count() const noexcept { return static_cast<std::int64_t>(fx_.size()); }

 private:
  enum class Strategy { Null, Recurrence, Window };

  KernelSpec kernel_;
  Strategy strategy_ = Strategy::Window;
  double c_ = 0.0, rho_ = 0.0, s_ = 0.0;
  std::int64_t window_ = detail::kMaxWindow;
  double tail_ = 0.0;
  double dropped_max_ = 0.0;
  std::vector<double> coeff_;
  std::vector<double> fx_;
};

/// S(n) = sum_{j=0}^{n} k(n-j) f(x(j)), summed in ascending j.
inline double volterra_term(const RealSeq& x_prefix, const KernelSpec& kernel, const NonlinearitySpec& f,
                            std::int64_t n) {
  if (x_prefix.start != 0) throw ArgumentError("volterra_term needs an x-like sequence starting at 0");
  if (n < 0 || n > x_prefix.last()) throw ArgumentError("volterra_term index beyond the supplied prefix");
  double s = 0.0;
  for (std::int64_t j = 0; j <= n; ++j) s += kernel(n - j) * f(x_prefix[j]);
  return s;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimConfig {
  KernelSpec kernel;
  NonlinearitySpec f;
  ForcingSequence forcing;
  double xi = 0.0;
  std::int64_t horizon = 1;
  SolverMode mode = SolverMode::Auto;
  double overflow_limit = 1e300;

  std::string canonical() const {
    return "sim(" + kernel.canonical() + ";" + f.canonical() + ";forcing=" + forcing.fingerprint +
           ";xi=" + format_double(xi) + ";N=" + std::to_string(horizon) + ";mode=" + std::string(to_string(mode)) +
           ";overflow_limit=" + format_double(overflow_limit) + ")";
  }

  std::string fingerprint() const { return hex64(fnv1a64(canonical())); }
};

struct Path {
  RealSeq x{0, {}};  ///< x(0..N)
  RealSeq s{0, {}};  ///< S(0..N-1)
  RealSeq h{1, {}};  ///< H(1..N) as used
  std::string fingerprint;
  double s_error_bound = 0.0;  ///< max truncation error over all S(n)

  std::int64_t horizon() const noexcept { return x.size() - 1; }

  /// The first n+1 entries of x and the matching forcing and S values. The
  /// recursion is causal, so this equals a simulation run to horizon n.
  Path prefix(std::int64_t n) const {
    Path p;
    p.x = x.prefix(n);
    p.s = s.prefix(n - 1);
    p.h = h.prefix(n);
    p.fingerprint = fingerprint;
    p.s_error_bound = s_error_bound;
    return p;
  }
};

inline Path simulate(const SimConfig& cfg) {
  if (cfg.horizon < 1) throw ArgumentError("horizon must be at least 1");
  if (cfg.forcing.size() < cfg.horizon) throw ArgumentError("forcing is shorter than the horizon");
  if (cfg.forcing.values.start != 1) throw ArgumentError("forcing must be indexed from 1");
  if (!(cfg.overflow_limit > 0.0)) throw ArgumentError("overflow_limit must be positive");
  if (!std::isfinite(cfg.xi)) throw ArgumentError("initial condition must be finite");

  const std::int64_t N = cfg.horizon;
  Path p;
  p.fingerprint = cfg.fingerprint();
  p.x.values.resize(static_cast<std::size_t>(N + 1));
  p.s.values.resize(static_cast<std::size_t>(N));
  p.h = cfg.forcing.values.prefix(N);

  VolterraAccumulator acc(cfg.kernel, cfg.mode, N);
  double x = cfg.xi;
  p.x.values[0] = x;
  for (std::int64_t n = 0; n < N; ++n) {
    const double s = acc.push(cfg.f(x));
    p.s_error_bound = std::max(p.s_error_bound, acc.truncation_error());
    if (!std::isfinite(s)) throw OverflowError("Volterra sum overflowed", n);
    x = (cfg.forcing.values[n + 1] + s) + cfg.forcing.correction_at(n + 1);
    if (!std::isfinite(x) || std::abs(x) > cfg.overflow_limit) throw OverflowError("path exceeded overflow limit", n + 1);
    p.s.values[static_cast<std::size_t>(n)] = s;
    p.x.values[static_cast<std::size_t>(n + 1)] = x;
  }
  return p;
}

// ---------------------------------------------------------------------------
// recover_forcing
// ---------------------------------------------------------------------------

namespace detail {

// Find (hi, corr) with fl(fl(hi + s) + corr) == y.
inline bool split_target(double y, double s, double& hi, double& corr) {
  auto attempt = [&](double h) {
    const double t = h + s;
    const double c = y - t;
    if (std::isfinite(t) && (t + c) == y) {
      hi = h;
      corr = c;
      return true;
    }
    return false;
  };
  const double h0 = y - s;
  if (attempt(h0)) return true;
  double up = h0, down = h0;
  for (int i = 0; i < 64; ++i) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    if (attempt(up) || attempt(down)) return true;
  }
  return false;
}

}  // namespace detail

/// H(n+1) := y(n+1) - S_y(n). Simulating with the result, xi = y(0) and the
/// same solver mode reproduces y bit for bit.
inline ForcingSequence recover_forcing(const RealSeq& y, const KernelSpec& kernel, const NonlinearitySpec& f,
                                       SolverMode mode = SolverMode::Reference) {
  if (y.start != 0) throw ArgumentError("recover_forcing needs y indexed from 0");
  if (y.size() < 1) throw ArgumentError("recover_forcing needs y(0)");
  if (!y.all_finite()) throw ArgumentError("recover_forcing needs finite y");

  const std::int64_t N = y.last();
  std::vector<double> h(static_cast<std::size_t>(N));
  std::vector<double> corr(static_cast<std::size_t>(N));
  bool any_corr = false;
  VolterraAccumulator acc(kernel, mode, N);
  for (std::int64_t n = 0; n < N; ++n) {
    const double s = acc.push(f(y[n]));
    if (!std::isfinite(s)) throw OverflowError("Volterra sum overflowed", n);
    double hi = 0.0, c = 0.0;
    if (!detail::split_target(y[n + 1], s, hi, c))
      throw Error("cannot represent forcing at index " + std::to_string(n + 1) + " exactly");
    h[static_cast<std::size_t>(n)] = hi;
    corr[static_cast<std::size_t>(n)] = c;
    any_corr = any_corr || c != 0.0;
  }

  std::uint64_t d = fnv1a64("forcing.recovered(" + kernel.canonical() + ";" + f.canonical() + ";mode=" +
                            std::string(to_string(mode)) + ";y=");
  for (double v : y.values) d = fnv1a64(format_double(v) + ";", d);

  ForcingSequence out;
  out.fingerprint = hex64(d);
  out.values = RealSeq::from_one(std::move(h));
  if (any_corr) out.correction = std::move(corr);
  out.initial_state = y[0];
  return out;
}

}  // namespace volterra
