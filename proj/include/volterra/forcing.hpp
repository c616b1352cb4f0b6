#pragma once

// Forcing sequences H(1..N): deterministic growth and fluctuation patterns,
// seeded iid noise and the forcing recovered from a prescribed alternating
// path. Random values are a pure function of (seed, stream, index), so any
// H(n) can be produced on its own and shorter runs are prefixes of longer ones.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "volterra/canonical.hpp"
#include "volterra/engine.hpp"
#include "volterra/errors.hpp"
#include "volterra/seqcore.hpp"

namespace volterra {

// ---------------------------------------------------------------------------
// Counter-based generator
// ---------------------------------------------------------------------------

namespace rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

/// Uniform on (0, 1]; never returns 0.
inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return static_cast<double>((bits(seed, stream, index) >> 11) + 1) * 0x1.0p-53;
}

/// Standard normal via Box-Muller (cosine branch) on streams 0 and 1.
inline double normal(std::uint64_t seed, std::uint64_t index) {
  const double u1 = uniform(seed, 0, index);
  const double u2 = uniform(seed, 1, index);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Symmetric Pareto: P(|H| > x) = x^(-alpha) for x >= 1, fair random sign.
inline double symmetric_pareto(std::uint64_t seed, double alpha, std::uint64_t index) {
  const double mag = std::pow(uniform(seed, 0, index), -1.0 / alpha);
  return (bits(seed, 1, index) >> 63) ? -mag : mag;
}

}  // namespace rng

// ---------------------------------------------------------------------------
// ForcingSpec
// ---------------------------------------------------------------------------

/// H(n) = scale * n^mu. scale = -1 gives the decreasing mirror image.
struct MonotonePower {
  double mu = 1.0;
  double scale = 1.0;
};

/// H(n) = e^{a n} * pattern[n mod pattern.size()].
struct PeriodicExponential {
  double a = 0.05;
  std::vector<double> pattern;
};

struct GaussianIid {
  double sigma = 1.0;
};

struct HeavyTailIid {
  double alpha = 1.5;
};

/// H(n) = amplitude * sin(n).
struct BoundedOscillation {
  double amplitude = 1.0;
};

/// Forcing recovered from y(n) = (n+1)^{mu_plus} (n even), -(n+1)^{mu_minus}
/// (n odd) under f(x) = sgn(x)|x|^alpha and the given kernel.
struct ConstructedAlternating {
  double mu_plus = 1.0;
  double mu_minus = 0.7;
  double alpha = 0.5;
  KernelSpec kernel = KernelSpec::geometric(1.0, 0.5);
  SolverMode mode = SolverMode::Auto;
};

/// H(n) = plus_scale * n^{plus_exponent} for even n and
/// -minus_scale * n^{minus_exponent} for odd n.
struct SignedAlternating {
  double plus_scale = 1.0;
  double plus_exponent = 1.0;
  double minus_scale = 1.0;
  double minus_exponent = 1.0;
};

using ForcingVariant = std::variant<MonotonePower, PeriodicExponential, GaussianIid, HeavyTailIid, BoundedOscillation,
                                    ConstructedAlternating, SignedAlternating>;

class ForcingSpec {
 public:
  ForcingSpec() : ForcingSpec(GaussianIid{}, 0) {}

  ForcingSpec(ForcingVariant v, std::uint64_t seed) : v_(std::move(v)), seed_(seed) {
    std::visit([](const auto& s) { validate(s); }, v_);
  }

  const ForcingVariant& variant() const noexcept { return v_; }
  std::uint64_t seed() const noexcept { return seed_; }

  ForcingSpec with_seed(std::uint64_t seed) const { return ForcingSpec(v_, seed); }

  bool stochastic() const noexcept {
    return std::holds_alternative<GaussianIid>(v_) || std::holds_alternative<HeavyTailIid>(v_);
  }

  std::string type_name() const {
    static constexpr const char* names[] = {"monotone-power",     "periodic-exponential",    "gaussian-iid",
                                            "heavytail-iid",      "bounded-oscillation",     "constructed-alternating",
                                            "signed-alternating"};
    return names[v_.index()];
  }

  std::string canonical() const {
    std::string body = std::visit(
        [](const auto& s) -> std::string {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, MonotonePower>)
            return "mu=" + format_double(s.mu) + ",scale=" + format_double(s.scale);
          else if constexpr (std::is_same_v<T, PeriodicExponential>)
            return "a=" + format_double(s.a) + ",pattern=" + format_list(s.pattern);
          else if constexpr (std::is_same_v<T, GaussianIid>)
            return "sigma=" + format_double(s.sigma);
          else if constexpr (std::is_same_v<T, HeavyTailIid>)
            return "alpha=" + format_double(s.alpha);
          else if constexpr (std::is_same_v<T, BoundedOscillation>)
            return "amplitude=" + format_double(s.amplitude);
          else if constexpr (std::is_same_v<T, ConstructedAlternating>)
            return "mu_plus=" + format_double(s.mu_plus) + ",mu_minus=" + format_double(s.mu_minus) +
                   ",alpha=" + format_double(s.alpha) + ",kernel=" + s.kernel.canonical() +
                   ",mode=" + std::string(to_string(s.mode));
          else
            return "plus_scale=" + format_double(s.plus_scale) + ",plus_exponent=" + format_double(s.plus_exponent) +
                   ",minus_scale=" + format_double(s.minus_scale) +
                   ",minus_exponent=" + format_double(s.minus_exponent);
        },
        v_);
    std::string out = "forcing." + type_name() + "(" + body + ")";
    if (stochastic()) out += ";seed=" + std::to_string(seed_);
    return out;
  }

  std::string fingerprint() const { return hex64(fnv1a64(canonical())); }

 private:
  static void validate(const MonotonePower& s) {
    if (!(s.mu > 0.0) || !std::isfinite(s.mu)) throw ArgumentError("monotone-power forcing requires mu > 0");
    if (s.scale == 0.0 || !std::isfinite(s.scale)) throw ArgumentError("monotone-power scale must be nonzero");
  }
  static void validate(const PeriodicExponential& s) {
    if (!(s.a > 0.0) || !std::isfinite(s.a)) throw ArgumentError("periodic-exponential forcing requires a > 0");
    if (s.pattern.empty()) throw ArgumentError("periodic-exponential forcing needs a nonempty pattern");
    double lo = s.pattern.front(), hi = s.pattern.front();
    for (double p : s.pattern) {
      if (!std::isfinite(p)) throw ArgumentError("periodic pattern entries must be finite");
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    if (!(lo > 0.0 && hi > lo)) throw ArgumentError("periodic pattern requires max > min > 0");
  }
  static void validate(const GaussianIid& s) {
    if (!(s.sigma > 0.0) || !std::isfinite(s.sigma)) throw ArgumentError("gaussian forcing requires sigma > 0");
  }
  static void validate(const HeavyTailIid& s) {
    if (!(s.alpha > 0.0) || !std::isfinite(s.alpha)) throw ArgumentError("heavytail forcing requires alpha > 0");
  }
  static void validate(const BoundedOscillation& s) {
    if (!std::isfinite(s.amplitude)) throw ArgumentError("oscillation amplitude must be finite");
  }
  static void validate(const ConstructedAlternating& s) {
    if (!(s.mu_plus > s.mu_minus && s.mu_minus >= 0.0) || !std::isfinite(s.mu_plus))
      throw ArgumentError("constructed-alternating forcing requires mu_plus > mu_minus >= 0");
    if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw ArgumentError("constructed-alternating forcing requires alpha in (0,1)");
  }
  static void validate(const SignedAlternating& s) {
    for (double v : {s.plus_scale, s.minus_scale})
      if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError("signed-alternating scales must be positive");
    for (double v : {s.plus_exponent, s.minus_exponent})
      if (!(v >= 0.0) || !std::isfinite(v)) throw ArgumentError("signed-alternating exponents must be nonnegative");
  }

  ForcingVariant v_;
  std::uint64_t seed_ = 0;
};

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

/// The target path y(0..N) of the constructed example.
inline RealSeq constructed_target(const ConstructedAlternating& s, std::int64_t N) {
  std::vector<double> y(static_cast<std::size_t>(N + 1));
  for (std::int64_t n = 0; n <= N; ++n) {
    const double m = static_cast<double>(n) + 1.0;
    y[static_cast<std::size_t>(n)] = n % 2 == 0 ? std::pow(m, s.mu_plus) : -std::pow(m, s.mu_minus);
  }
  return RealSeq::from_zero(std::move(y));
}

inline ForcingSequence generate(const ForcingSpec& spec, std::int64_t N, double overflow_limit = 1e300) {
  if (N < 1) throw ArgumentError("forcing length must be positive");

  ForcingSequence out;
  out.fingerprint = spec.fingerprint();
  out.seed = spec.seed();

  if (const auto* c = std::get_if<ConstructedAlternating>(&spec.variant())) {
    auto recovered = recover_forcing(constructed_target(*c, N), c->kernel, NonlinearitySpec::signed_power(c->alpha),
                                     c->mode);
    out.values = std::move(recovered.values);
    out.correction = std::move(recovered.correction);
    out.initial_state = recovered.initial_state;
  } else {
    const std::uint64_t seed = spec.seed();
    std::vector<double> h(static_cast<std::size_t>(N));
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          for (std::int64_t n = 1; n <= N; ++n) {
            const double t = static_cast<double>(n);
            const auto u = static_cast<std::uint64_t>(n);
            double v = 0.0;
            if constexpr (std::is_same_v<T, MonotonePower>) v = s.scale * std::pow(t, s.mu);
            else if constexpr (std::is_same_v<T, PeriodicExponential>)
              v = std::exp(s.a * t) * s.pattern[static_cast<std::size_t>(n) % s.pattern.size()];
            else if constexpr (std::is_same_v<T, GaussianIid>) v = s.sigma * rng::normal(seed, u);
            else if constexpr (std::is_same_v<T, HeavyTailIid>) v = rng::symmetric_pareto(seed, s.alpha, u);
            else if constexpr (std::is_same_v<T, BoundedOscillation>) v = s.amplitude * std::sin(t);
            else if constexpr (std::is_same_v<T, SignedAlternating>)
              v = n % 2 == 0 ? s.plus_scale * std::pow(t, s.plus_exponent) : -s.minus_scale * std::pow(t, s.minus_exponent);
            h[static_cast<std::size_t>(n - 1)] = v;
          }
        },
        spec.variant());
    out.values = RealSeq::from_one(std::move(h));
  }

  for (std::int64_t n = 1; n <= N; ++n) {
    const double v = out.values[n];
    if (!std::isfinite(v) || std::abs(v) > overflow_limit) throw OverflowError("forcing exceeded overflow limit", n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constructed example asymptotics
// ---------------------------------------------------------------------------

enum class ConstructedRegime { NegativeSideDominant, KernelDriven, Boundary };

struct ConstructedPrediction {
  ConstructedRegime regime = ConstructedRegime::Boundary;
  std::string label;
  double h_plus_exponent = 0.0;
  std::optional<double> h_minus_exponent;
  /// Leading constant of H*_-(n) in the kernel-driven regime, sum_j k(2j).
  std::optional<double> h_minus_constant;
};

/// Growth of the recovered forcing. If mu_plus*alpha < mu_minus the negative
/// side keeps its own exponent; if mu_minus < alpha*mu_plus the kernel feeds
/// the positive peaks through f and H*_-(n) ~ sum_j k(2j) * n^{alpha mu_plus}.
/// Equality is left unpredicted.
inline ConstructedPrediction constructed_H_asymptotics(const ConstructedAlternating& s) {
  ConstructedPrediction p;
  p.h_plus_exponent = s.mu_plus;
  const double cross = s.alpha * s.mu_plus;
  if (cross < s.mu_minus) {
    p.regime = ConstructedRegime::NegativeSideDominant;
    p.label = "A";
    p.h_minus_exponent = s.mu_minus;
  } else if (s.mu_minus < cross) {
    p.regime = ConstructedRegime::KernelDriven;
    p.label = "B";
    p.h_minus_exponent = cross;
    p.h_minus_constant = s.kernel.even_index_sum();
  } else {
    p.regime = ConstructedRegime::Boundary;
    p.label = "boundary regime, no prediction";
  }
  return p;
}

inline ConstructedPrediction constructed_H_asymptotics(const ForcingSpec& spec) {
  const auto* c = std::get_if<ConstructedAlternating>(&spec.variant());
  if (!c) throw ArgumentError("constructed_H_asymptotics needs a constructed-alternating forcing");
  return constructed_H_asymptotics(*c);
}

}  // namespace volterra
