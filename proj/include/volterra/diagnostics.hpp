#pragma once

// Derived sequences and finite-horizon estimators: running maxima and record
// times, ratio tracks, lambda and lambda2, tail-sup limsup proxies, the
// modulation residual and phi-moment time averages.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "volterra/canonical.hpp"
#include "volterra/errors.hpp"
#include "volterra/seqcore.hpp"

namespace volterra {

inline constexpr double kDefaultGuard = 1e-300;
inline constexpr double kDefaultTailFraction = 0.9;
inline constexpr double kSummaryFraction = 0.1;
inline constexpr double kDivergenceSlope = 0.05;

// ---------------------------------------------------------------------------
// Small statistics helpers
// ---------------------------------------------------------------------------

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

/// Number of trailing indices covered by `fraction` of a sequence of `len`.
inline std::int64_t tail_count(std::int64_t len, double fraction) {
  return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil(fraction * static_cast<double>(len))), 1, len);
}

struct WindowSummary {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double min = std::numeric_limits<double>::quiet_NaN();
  double max = std::numeric_limits<double>::quiet_NaN();
  std::int64_t count = 0;
};

/// Mean/min/max over the final `fraction` of a sequence, skipping NaN gaps.
inline WindowSummary summarize_tail(const RealSeq& seq, double fraction = kSummaryFraction) {
  WindowSummary s;
  if (seq.empty()) return s;
  const std::int64_t from = seq.last() - tail_count(seq.size(), fraction) + 1;
  double sum = 0.0;
  for (std::int64_t n = from; n <= seq.last(); ++n) {
    const double v = seq[n];
    if (std::isnan(v)) continue;
    if (s.count == 0) s.min = s.max = v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
    sum += v;
    ++s.count;
  }
  if (s.count) s.mean = sum / static_cast<double>(s.count);
  return s;
}

// ---------------------------------------------------------------------------
// Running maxima
// ---------------------------------------------------------------------------

struct MaxTrack {
  RealSeq values;
  std::vector<std::int64_t> argmax_times;  ///< aligned with values

  std::int64_t argmax_at(std::int64_t n) const { return argmax_times[static_cast<std::size_t>(n - values.start)]; }

  /// Indices at which the running maximum strictly increases.
  std::vector<std::int64_t> record_times() const {
    std::vector<std::int64_t> out;
    for (std::int64_t n = values.first(); n <= values.last(); ++n)
      if (argmax_at(n) == n) out.push_back(n);
    return out;
  }
};

enum class Side { Plus, Minus };

namespace detail {

template <class Fn>
MaxTrack running_max_of(const RealSeq& seq, Fn transform) {
  if (seq.empty()) throw ArgumentError("running maximum of an empty sequence");
  MaxTrack t;
  t.values.start = seq.start;
  t.values.values.resize(seq.values.size());
  t.argmax_times.resize(seq.values.size());
  double best = -std::numeric_limits<double>::infinity();
  std::int64_t arg = seq.start;
  for (std::int64_t n = seq.first(); n <= seq.last(); ++n) {
    const double v = transform(seq[n]);
    if (v > best) {  // strict: earliest index wins ties
      best = v;
      arg = n;
    }
    const auto i = static_cast<std::size_t>(n - seq.start);
    t.values.values[i] = best;
    t.argmax_times[i] = arg;
  }
  return t;
}

}  // namespace detail

/// max_{start <= j <= n} |seq(j)| with earliest attaining index.
inline MaxTrack running_max_abs(const RealSeq& seq) {
  return detail::running_max_of(seq, [](double v) { return std::abs(v); });
}

/// max_j seq(j) (Plus) or max_j -seq(j) (Minus). Values can be negative
/// before the sequence first takes the relevant sign.
inline MaxTrack running_signed_max(const RealSeq& seq, Side side) {
  if (side == Side::Plus) return detail::running_max_of(seq, [](double v) { return v; });
  return detail::running_max_of(seq, [](double v) { return -v; });
}

// ---------------------------------------------------------------------------
// Ratio tracks
// ---------------------------------------------------------------------------

struct RatioTrack {
  RealSeq values;  ///< NaN marks a gap
  std::int64_t gaps = 0;
  bool all_gaps = false;
  WindowSummary summary;  ///< over the final 10% of indices
};

inline RatioTrack ratio_track(const RealSeq& num, const RealSeq& den, double guard = kDefaultGuard) {
  if (num.start != den.start || num.size() != den.size()) throw ArgumentError("ratio_track needs aligned sequences");
  if (!(guard > 0.0)) throw ArgumentError("ratio_track guard must be positive");
  RatioTrack r;
  r.values.start = num.start;
  r.values.values.resize(num.values.size());
  for (std::size_t i = 0; i < num.values.size(); ++i) {
    if (std::abs(den.values[i]) >= guard) {
      r.values.values[i] = num.values[i] / den.values[i];
    } else {
      r.values.values[i] = std::numeric_limits<double>::quiet_NaN();
      ++r.gaps;
    }
  }
  r.all_gaps = r.gaps == num.size();
  r.summary = summarize_tail(r.values);
  return r;
}

// ---------------------------------------------------------------------------
// Divergence detection
// ---------------------------------------------------------------------------

struct DivergenceVerdict {
  bool divergent = false;
  double slope = std::numeric_limits<double>::quiet_NaN();  ///< log10 growth per decade
  std::vector<double> window_means;                         ///< mean log10 value per decade window
};

/// Splits a positive track into decade windows [10^k, 10^{k+1}), k >= 1, and
/// fits a least-squares line to the mean log10 value of each window. The
/// track is declared divergent when that line rises by at least `min_slope`
/// per decade and the last window sits above the first. Windows with fewer
/// than 10 usable points are ignored.
inline DivergenceVerdict detect_divergence(const RealSeq& track, double min_slope = kDivergenceSlope) {
  DivergenceVerdict out;
  std::vector<double> ks;
  for (int k = 1; k < 19; ++k) {
    const double lo_d = std::pow(10.0, k);
    if (lo_d > static_cast<double>(track.last())) break;
    const auto lo = std::max<std::int64_t>(static_cast<std::int64_t>(lo_d), track.first());
    const auto hi = std::min<std::int64_t>(static_cast<std::int64_t>(lo_d * 10.0) - 1, track.last());
    double sum = 0.0;
    std::int64_t count = 0;
    for (std::int64_t n = lo; n <= hi; ++n) {
      const double v = track[n];
      if (v > 0.0 && std::isfinite(v)) {
        sum += std::log10(v);
        ++count;
      }
    }
    if (count < 10) continue;
    ks.push_back(k);
    out.window_means.push_back(sum / static_cast<double>(count));
  }
  if (ks.size() < 2) return out;
  const double kbar = [&] {
    double s = 0.0;
    for (double k : ks) s += k;
    return s / static_cast<double>(ks.size());
  }();
  double mbar = 0.0;
  for (double m : out.window_means) mbar += m;
  mbar /= static_cast<double>(ks.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sxy += (ks[i] - kbar) * (out.window_means[i] - mbar);
    sxx += (ks[i] - kbar) * (ks[i] - kbar);
  }
  out.slope = sxy / sxx;
  out.divergent = out.slope >= min_slope && out.window_means.back() > out.window_means.front();
  return out;
}

// ---------------------------------------------------------------------------
// lambda and lambda2
// ---------------------------------------------------------------------------

enum class LimitRegime { Finite, PlusInfinity };

inline std::string_view to_string(LimitRegime r) { return r == LimitRegime::Finite ? "finite" : "+inf"; }

struct LambdaEstimate {
  double final = std::numeric_limits<double>::quiet_NaN();  ///< final-window mean, +inf in the +inf regime
  RealSeq track;
  LimitRegime regime = LimitRegime::Finite;
  DivergenceVerdict divergence;
};

namespace detail {

// Ratio num/den from the first index where both are positive (or, when num
// never turns positive, where den does). Classifies the +inf regime.
inline LambdaEstimate signed_ratio_estimate(const RealSeq& num, const RealSeq& den) {
  LambdaEstimate e;
  std::int64_t start = -1;
  bool num_ever_positive = false;
  for (std::int64_t n = num.first(); n <= num.last(); ++n) num_ever_positive = num_ever_positive || num[n] > 0.0;
  for (std::int64_t n = num.first(); n <= num.last(); ++n) {
    if (den[n] > 0.0 && (num[n] > 0.0 || !num_ever_positive)) {
      start = n;
      break;
    }
  }
  if (start < 0) {
    e.regime = LimitRegime::PlusInfinity;
    e.final = std::numeric_limits<double>::infinity();
    return e;
  }
  e.track.start = start;
  for (std::int64_t n = start; n <= num.last(); ++n) e.track.values.push_back(num[n] / den[n]);
  e.divergence = detect_divergence(e.track);
  if (e.divergence.divergent) {
    e.regime = LimitRegime::PlusInfinity;
    e.final = std::numeric_limits<double>::infinity();
  } else {
    e.final = summarize_tail(e.track).mean;
  }
  return e;
}

}  // namespace detail

/// lambda-hat: H*_-(n)/H*_+(n).
inline LambdaEstimate estimate_lambda(const RealSeq& H) {
  if (std::all_of(H.values.begin(), H.values.end(), [](double v) { return v == 0.0; }))
    throw DegenerateInputError("forcing is identically zero, lambda is undefined");
  const auto plus = running_signed_max(H, Side::Plus);
  const auto minus = running_signed_max(H, Side::Minus);
  return detail::signed_ratio_estimate(minus.values, plus.values);
}

/// lambda2-hat: H*_-(n)/f(H*_+(n)).
inline LambdaEstimate estimate_lambda2(const RealSeq& H, const NonlinearitySpec& f) {
  if (std::all_of(H.values.begin(), H.values.end(), [](double v) { return v == 0.0; }))
    throw DegenerateInputError("forcing is identically zero, lambda2 is undefined");
  const auto plus = running_signed_max(H, Side::Plus);
  const auto minus = running_signed_max(H, Side::Minus);
  RealSeq fplus{plus.values.start, {}};
  fplus.values.reserve(plus.values.values.size());
  for (double v : plus.values.values) fplus.values.push_back(f(v));
  return detail::signed_ratio_estimate(minus.values, fplus);
}

// ---------------------------------------------------------------------------
// Scaled tail sups
// ---------------------------------------------------------------------------

enum class SupKind { Abs, Pos, Neg };

/// sup over the final `tail_fraction` of indices of |seq(n)|/a(n) (or the
/// signed variants). Indices where a is undefined are skipped.
inline double tail_sup_ratio(const RealSeq& seq, const ScalerSpec& a, double tail_fraction = kDefaultTailFraction,
                             SupKind kind = SupKind::Abs) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw ArgumentError("tail_fraction must lie in (0,1]");
  if (seq.empty()) throw ArgumentError("tail_sup_ratio of an empty sequence");
  const std::int64_t from = seq.last() - tail_count(seq.size(), tail_fraction) + 1;
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::int64_t n = from; n <= seq.last(); ++n) {
    if (!a.defined_at(n)) continue;
    const double v = kind == SupKind::Abs ? std::abs(seq[n]) : kind == SupKind::Pos ? seq[n] : -seq[n];
    best = std::max(best, v / a(n));
    any = true;
  }
  if (!any) throw ArgumentError("tail window contains no index where the scaler is defined");
  return best;
}

/// Track of the running tail statistic sup_{m <= n} |seq(m)|/a(m), used for
/// trend checks on limsup proxies.
inline RealSeq scaled_running_sup(const RealSeq& seq, const ScalerSpec& a, SupKind kind = SupKind::Abs) {
  RealSeq out{std::max(seq.first(), a.first_index()), {}};
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t n = out.start; n <= seq.last(); ++n) {
    if (!a.defined_at(n)) break;
    const double v = kind == SupKind::Abs ? std::abs(seq[n]) : kind == SupKind::Pos ? seq[n] : -seq[n];
    best = std::max(best, v / a(n));
    out.values.push_back(best);
  }
  return out;
}

/// sup_{from <= n <= last} log|seq(n)| / log n.
inline double log_exponent_sup(const RealSeq& seq, std::int64_t from) {
  from = std::max<std::int64_t>({from, seq.first(), 2});
  if (from > seq.last()) throw ArgumentError("log_exponent_sup window is empty");
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t n = from; n <= seq.last(); ++n) {
    const double v = std::abs(seq[n]);
    if (v > 0.0) best = std::max(best, std::log(v) / std::log(static_cast<double>(n)));
  }
  return best;
}

/// |seq(n)/a(n) - Lambda(n)| on the common index range.
inline RealSeq lambda_a_residual(const RealSeq& seq, const ScalerSpec& a, const RealSeq& Lambda,
                                 double guard = kDefaultGuard) {
  if (seq.start != Lambda.start || seq.size() != Lambda.size())
    throw ArgumentError("lambda_a_residual needs aligned sequences");
  RealSeq out{seq.start, std::vector<double>(seq.values.size())};
  for (std::int64_t n = seq.first(); n <= seq.last(); ++n) {
    const double an = a(n);
    if (!(std::abs(an) >= guard)) throw DomainError("scaler below guard at n=" + std::to_string(n));
    out.values[static_cast<std::size_t>(n - seq.start)] = std::abs(seq[n] / an - Lambda[n]);
  }
  return out;
}

inline double final_window_sup(const RealSeq& seq, std::int64_t count) {
  if (seq.empty() || count < 1) throw ArgumentError("final window is empty");
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t n = std::max(seq.first(), seq.last() - count + 1); n <= seq.last(); ++n) best = std::max(best, seq[n]);
  return best;
}

// ---------------------------------------------------------------------------
// phi-moment time averages
// ---------------------------------------------------------------------------

struct PowerWeight {
  double p = 1.0;
};

/// phi(u) = exp(a u^2).
struct GaussExpWeight {
  double a = 0.3;
};

class ConvexWeightSpec {
 public:
  using Variant = std::variant<PowerWeight, GaussExpWeight>;

  ConvexWeightSpec(Variant v, double eta = 0.0) : v_(v), eta_(eta) {
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw ArgumentError("weight eta must be nonnegative");
    if (const auto* p = std::get_if<PowerWeight>(&v_); p && !(p->p >= 1.0 && std::isfinite(p->p)))
      throw ArgumentError("power weight requires p >= 1");
    if (const auto* g = std::get_if<GaussExpWeight>(&v_); g && !(g->a > 0.0 && std::isfinite(g->a)))
      throw ArgumentError("gaussian-exp weight requires a > 0");
  }

  static ConvexWeightSpec power(double p, double eta = 0.0) { return {PowerWeight{p}, eta}; }
  static ConvexWeightSpec gaussian_exp(double a, double eta = 0.0) { return {GaussExpWeight{a}, eta}; }

  double eta() const noexcept { return eta_; }
  const Variant& variant() const noexcept { return v_; }

  double phi(double u) const {
    if (const auto* p = std::get_if<PowerWeight>(&v_)) return p->p == 1.0 ? u : std::pow(u, p->p);
    return std::exp(std::get<GaussExpWeight>(v_).a * u * u);
  }

  std::string canonical() const {
    if (const auto* p = std::get_if<PowerWeight>(&v_))
      return "phi.power(p=" + format_double(p->p) + ",eta=" + format_double(eta_) + ")";
    return "phi.gaussian_exp(a=" + format_double(std::get<GaussExpWeight>(v_).a) + ",eta=" + format_double(eta_) + ")";
  }

 private:
  Variant v_;
  double eta_;
};

/// A(n) = (1/m) sum_{j=start}^{n} phi((1+eta)|seq(j)|), m the number of terms.
inline RealSeq phi_time_average(const RealSeq& seq, const ConvexWeightSpec& w) {
  RealSeq out{seq.start, std::vector<double>(seq.values.size())};
  const double inflate = 1.0 + w.eta();
  double sum = 0.0;
  for (std::int64_t n = seq.first(); n <= seq.last(); ++n) {
    sum += w.phi(inflate * std::abs(seq[n]));
    if (!std::isfinite(sum)) throw OverflowError("phi time average overflowed", n);
    const auto i = static_cast<std::size_t>(n - seq.start);
    out.values[i] = sum / static_cast<double>(i + 1);
  }
  return out;
}

inline RealSeq pth_moment_track(const RealSeq& seq, double p) {
  if (!(p >= 1.0)) throw ArgumentError("pth moment requires p >= 1");
  return phi_time_average(seq, ConvexWeightSpec::power(p));
}

}  // namespace volterra
