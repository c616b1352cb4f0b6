#pragma once

// Shared domain types: sequences, summable kernels, sublinear nonlinearities
// and the auxiliary scaling sequences a(n). Everything here is immutable after
// construction and safe to share between threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "volterra/canonical.hpp"
#include "volterra/errors.hpp"

namespace volterra {

inline constexpr double kDefaultTruncTol = 1e-12;

// ---------------------------------------------------------------------------
// RealSeq
// ---------------------------------------------------------------------------

/// A finite real sequence addressed by its mathematical index. H-like
/// sequences start at 1, x-like sequences at 0.
struct RealSeq {
  std::int64_t start = 0;
  std::vector<double> values;

  RealSeq() = default;
  RealSeq(std::int64_t start_index, std::vector<double> v) : start(start_index), values(std::move(v)) {}

  static RealSeq from_zero(std::vector<double> v) { return {0, std::move(v)}; }
  static RealSeq from_one(std::vector<double> v) { return {1, std::move(v)}; }

  std::int64_t size() const noexcept { return static_cast<std::int64_t>(values.size()); }
  bool empty() const noexcept { return values.empty(); }
  std::int64_t first() const noexcept { return start; }
  std::int64_t last() const noexcept { return start + size() - 1; }
  bool contains(std::int64_t n) const noexcept { return n >= start && n <= last(); }

  double operator[](std::int64_t n) const { return values[static_cast<std::size_t>(n - start)]; }

  double at(std::int64_t n) const {
    if (!contains(n)) throw ArgumentError("sequence index " + std::to_string(n) + " out of range");
    return (*this)[n];
  }

  /// Leading part covering indices start..last_index.
  RealSeq prefix(std::int64_t last_index) const {
    const auto count = std::clamp<std::int64_t>(last_index - start + 1, 0, size());
    return {start, std::vector<double>(values.begin(), values.begin() + count)};
  }

  bool all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
  }
};

// ---------------------------------------------------------------------------
// KernelSpec
// ---------------------------------------------------------------------------

struct FiniteKernel {
  std::vector<double> coeffs;
};

/// k(n) = c * rho^n.
struct GeometricKernel {
  double c = 1.0;
  double rho = 0.5;
};

/// k(n) = c * (n+1)^(-beta).
struct PolynomialKernel {
  double c = 1.0;
  double beta = 2.0;
};

namespace detail {

// Sum_{m >= M} m^(-beta) for beta > 1, M >= 1, by Euler-Maclaurin with three
// correction terms. Returns the estimate and a bound on its error.
inline std::pair<double, double> zeta_tail(double beta, double M) {
  const double p = std::pow(M, -beta);
  const double est = M * p / (beta - 1.0) + 0.5 * p + beta * p / (12.0 * M) -
                     beta * (beta + 1) * (beta + 2) * p / (720.0 * M * M * M);
  const double err = beta * (beta + 1) * (beta + 2) * (beta + 3) * (beta + 4) * p / (30240.0 * std::pow(M, 5));
  return {est, err};
}

// Sum_{m >= 1} m^(-beta) to within tol.
inline double zeta_sum(double beta, double tol) {
  std::int64_t M = 64;
  while (zeta_tail(beta, static_cast<double>(M)).second > 0.5 * tol && M < (std::int64_t{1} << 24)) M *= 2;
  double partial = 0.0;
  for (std::int64_t m = M - 1; m >= 1; --m) partial += std::pow(static_cast<double>(m), -beta);
  return partial + zeta_tail(beta, static_cast<double>(M)).first;
}

inline constexpr std::int64_t kMaxWindow = std::int64_t{1} << 62;

}  // namespace detail

/// Absolutely summable convolution kernel k(0), k(1), ... together with the
/// tolerance used whenever an infinite tail has to be cut off.
class KernelSpec {
 public:
  using Variant = std::variant<FiniteKernel, GeometricKernel, PolynomialKernel>;

  KernelSpec() : KernelSpec(FiniteKernel{}, kDefaultTruncTol) {}

  KernelSpec(Variant v, double trunc_tol) : v_(std::move(v)), tol_(trunc_tol) {
    if (!(tol_ >= 0.0) || !std::isfinite(tol_)) throw ArgumentError("kernel trunc_tol must be a nonnegative real");
    std::visit([](const auto& k) { validate(k); }, v_);
  }

  static KernelSpec null() { return KernelSpec(FiniteKernel{}, kDefaultTruncTol); }
  static KernelSpec finite(std::vector<double> coeffs, double tol = kDefaultTruncTol) {
    return KernelSpec(FiniteKernel{std::move(coeffs)}, tol);
  }
  static KernelSpec geometric(double c, double rho, double tol = kDefaultTruncTol) {
    return KernelSpec(GeometricKernel{c, rho}, tol);
  }
  static KernelSpec polynomial(double c, double beta, double tol = kDefaultTruncTol) {
    return KernelSpec(PolynomialKernel{c, beta}, tol);
  }

  const Variant& variant() const noexcept { return v_; }
  double trunc_tol() const noexcept { return tol_; }

  bool is_geometric() const noexcept { return std::holds_alternative<GeometricKernel>(v_); }
  bool is_finite() const noexcept { return std::holds_alternative<FiniteKernel>(v_); }

  bool is_null() const {
    if (const auto* f = std::get_if<FiniteKernel>(&v_))
      return std::all_of(f->coeffs.begin(), f->coeffs.end(), [](double c) { return c == 0.0; });
    if (const auto* g = std::get_if<GeometricKernel>(&v_)) return g->c == 0.0;
    return std::get<PolynomialKernel>(v_).c == 0.0;
  }

  /// k(j) for j >= 0.
  double operator()(std::int64_t j) const {
    if (j < 0) return 0.0;
    return std::visit(
        [j](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, FiniteKernel>) {
            return j < static_cast<std::int64_t>(k.coeffs.size()) ? k.coeffs[static_cast<std::size_t>(j)] : 0.0;
          } else if constexpr (std::is_same_v<T, GeometricKernel>) {
            return k.c * std::pow(k.rho, static_cast<double>(j));
          } else {
            return k.c * std::pow(static_cast<double>(j) + 1.0, -k.beta);
          }
        },
        v_);
  }

  /// |k|_1. Exact for finite and geometric kernels; within trunc_tol for
  /// polynomial kernels.
  double l1() const {
    return std::visit(
        [this](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, FiniteKernel>) {
            double s = 0.0;
            for (double c : k.coeffs) s += std::abs(c);
            return s;
          } else if constexpr (std::is_same_v<T, GeometricKernel>) {
            return std::abs(k.c) / (1.0 - std::abs(k.rho));
          } else {
            if (k.c == 0.0) return 0.0;
            const double tol = tol_ > 0.0 ? tol_ / std::abs(k.c) : 1e-15;
            return std::abs(k.c) * detail::zeta_sum(k.beta, tol);
          }
        },
        v_);
  }

  /// Certified upper bound on sum_{j >= L} |k(j)|.
  double tail_bound(std::int64_t L) const {
    if (L <= 0) return l1();
    return std::visit(
        [L](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, FiniteKernel>) {
            double s = 0.0;
            for (std::size_t j = static_cast<std::size_t>(L); j < k.coeffs.size(); ++j) s += std::abs(k.coeffs[j]);
            return s;
          } else if constexpr (std::is_same_v<T, GeometricKernel>) {
            return std::abs(k.c) * std::pow(std::abs(k.rho), static_cast<double>(L)) / (1.0 - std::abs(k.rho));
          } else {
            // sum_{j >= L} (j+1)^(-beta) <= L^(1-beta) / (beta-1)
            return std::abs(k.c) * std::pow(static_cast<double>(L), 1.0 - k.beta) / (k.beta - 1.0);
          }
        },
        v_);
  }

  /// Smallest window length L whose discarded tail sum_{j >= L} |k(j)| is at
  /// most tol. For finite kernels this is the support length.
  std::int64_t window(double tol) const {
    return std::visit(
        [tol, this](const auto& k) -> std::int64_t {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, FiniteKernel>) {
            std::int64_t L = static_cast<std::int64_t>(k.coeffs.size());
            while (L > 0 && k.coeffs[static_cast<std::size_t>(L - 1)] == 0.0) --L;
            return L;
          } else if constexpr (std::is_same_v<T, GeometricKernel>) {
            if (k.c == 0.0) return 0;
            if (k.rho == 0.0) return 1;
            if (tol <= 0.0) return detail::kMaxWindow;
            const double r = std::abs(k.rho);
            const double L = std::log(tol * (1.0 - r) / std::abs(k.c)) / std::log(r);
            return clamp_window(L);
          } else {
            if (k.c == 0.0) return 0;
            if (tol <= 0.0) return detail::kMaxWindow;
            const double L = std::pow(std::abs(k.c) / ((k.beta - 1.0) * tol), 1.0 / (k.beta - 1.0));
            std::int64_t w = clamp_window(L);
            while (w > 1 && tail_bound(w - 1) <= tol) --w;
            return w;
          }
        },
        v_);
  }

  /// Finite kernel made of k(0..L-1).
  KernelSpec truncated(std::int64_t L) const {
    if (L < 0) throw ArgumentError("truncation length must be nonnegative");
    std::vector<double> c(static_cast<std::size_t>(L));
    for (std::int64_t j = 0; j < L; ++j) c[static_cast<std::size_t>(j)] = (*this)(j);
    return finite(std::move(c), tol_);
  }

  /// sum_j k(2j), the even-index mass (signed).
  double even_index_sum() const {
    return std::visit(
        [this](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, FiniteKernel>) {
            double s = 0.0;
            for (std::size_t j = 0; j < k.coeffs.size(); j += 2) s += k.coeffs[j];
            return s;
          } else if constexpr (std::is_same_v<T, GeometricKernel>) {
            return k.c / (1.0 - k.rho * k.rho);
          } else {
            // sum over odd m of m^(-beta) = (1 - 2^-beta) zeta(beta)
            if (k.c == 0.0) return 0.0;
            const double tol = tol_ > 0.0 ? tol_ / std::abs(k.c) : 1e-15;
            return k.c * (1.0 - std::pow(2.0, -k.beta)) * detail::zeta_sum(k.beta, tol);
          }
        },
        v_);
  }

  std::string canonical() const {
    return std::visit(
        [this](const auto& k) -> std::string {
          using T = std::decay_t<decltype(k)>;
          std::string tol = ",trunc_tol=" + format_double(tol_) + ")";
          if constexpr (std::is_same_v<T, FiniteKernel>) {
            return "kernel.finite(coeffs=" + format_list(k.coeffs) + tol;
          } else if constexpr (std::is_same_v<T, GeometricKernel>) {
            return "kernel.geometric(c=" + format_double(k.c) + ",rho=" + format_double(k.rho) + tol;
          } else {
            return "kernel.polynomial(c=" + format_double(k.c) + ",beta=" + format_double(k.beta) + tol;
          }
        },
        v_);
  }

 private:
  static std::int64_t clamp_window(double L) {
    if (!(L > 0.0)) return 1;
    if (L >= static_cast<double>(detail::kMaxWindow)) return detail::kMaxWindow;
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(L)));
  }

  static void validate(const FiniteKernel& k) {
    for (double c : k.coeffs)
      if (!std::isfinite(c)) throw ArgumentError("finite kernel coefficients must be finite");
  }
  static void validate(const GeometricKernel& k) {
    if (!std::isfinite(k.c)) throw ArgumentError("geometric kernel c must be finite");
    if (!(std::abs(k.rho) < 1.0)) throw ArgumentError("geometric kernel requires |rho| < 1");
  }
  static void validate(const PolynomialKernel& k) {
    if (!std::isfinite(k.c)) throw ArgumentError("polynomial kernel c must be finite");
    if (!(k.beta > 1.0) || !std::isfinite(k.beta)) throw ArgumentError("polynomial kernel requires beta > 1");
  }

  Variant v_;
  double tol_;
};

inline double kernel_l1(const KernelSpec& k) { return k.l1(); }

// ---------------------------------------------------------------------------
// NonlinearitySpec
// ---------------------------------------------------------------------------

/// f(x) = sgn(x) |x|^alpha, alpha in (0, 1).
struct SignedPower {
  double alpha = 0.5;
};

/// f(x) = clamp(slope * x, -bound, bound).
struct BoundedRamp {
  double bound = 1.0;
  double slope = 1.0;
};

/// Piecewise-linear interpolation through (xs[i], ys[i]); undefined outside
/// [xs.front(), xs.back()].
struct TableNonlinearity {
  std::vector<double> xs;
  std::vector<double> ys;
};

/// phi(u) = scale * u^exponent, paired with f so that |f(x)| / phi(|x|) -> 1.
struct Envelope {
  double scale = 1.0;
  double exponent = 0.5;
  double x0 = 1.0;

  double operator()(double u) const { return scale * std::pow(u, exponent); }
};

class NonlinearitySpec {
 public:
  using Variant = std::variant<SignedPower, BoundedRamp, TableNonlinearity>;

  NonlinearitySpec() : NonlinearitySpec(SignedPower{0.5}) {}

  explicit NonlinearitySpec(Variant v, std::optional<Envelope> envelope = std::nullopt)
      : v_(std::move(v)), envelope_(envelope) {
    std::visit([](const auto& f) { validate(f); }, v_);
    if (envelope_) validate_envelope();
  }

  static NonlinearitySpec signed_power(double alpha) { return NonlinearitySpec(SignedPower{alpha}); }
  static NonlinearitySpec bounded(double bound, double slope = 1.0) {
    return NonlinearitySpec(BoundedRamp{bound, slope});
  }
  static NonlinearitySpec table(std::vector<double> xs, std::vector<double> ys) {
    return NonlinearitySpec(TableNonlinearity{std::move(xs), std::move(ys)});
  }

  NonlinearitySpec with_envelope(Envelope e) const { return NonlinearitySpec(v_, e); }

  const Variant& variant() const noexcept { return v_; }
  const std::optional<Envelope>& envelope() const noexcept { return envelope_; }

  /// Exponent alpha of a signed-power nonlinearity, if that is what this is.
  std::optional<double> power_exponent() const {
    if (const auto* p = std::get_if<SignedPower>(&v_)) return p->alpha;
    return std::nullopt;
  }

  double operator()(double x) const {
    return std::visit(
        [x](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, SignedPower>) {
            return std::copysign(std::pow(std::abs(x), f.alpha), x);
          } else if constexpr (std::is_same_v<T, BoundedRamp>) {
            return std::clamp(f.slope * x, -f.bound, f.bound);
          } else {
            if (!(x >= f.xs.front() && x <= f.xs.back()))
              throw DomainError("table nonlinearity queried outside its range at x=" + format_double(x));
            auto it = std::upper_bound(f.xs.begin(), f.xs.end(), x);
            if (it == f.xs.end()) return f.ys.back();
            const auto i = static_cast<std::size_t>(it - f.xs.begin());
            const double t = (x - f.xs[i - 1]) / (f.xs[i] - f.xs[i - 1]);
            return f.ys[i - 1] + t * (f.ys[i] - f.ys[i - 1]);
          }
        },
        v_);
  }

  /// F(eps) with |f(x)| <= F(eps) + eps |x| for every x in the domain of f.
  double sublinearity_bound(double eps) const {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ArgumentError("sublinearity bound requires eps > 0");
    return std::visit(
        [eps](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, SignedPower>) {
            // sup_{u >= 0} u^a - eps u, attained at u = (a/eps)^(1/(1-a))
            const double a = f.alpha;
            return (1.0 - a) * std::pow(a / eps, a / (1.0 - a));
          } else if constexpr (std::is_same_v<T, BoundedRamp>) {
            return f.bound;
          } else {
            // |f| - eps|x| is convex between knots and 0, so its max sits on one of them.
            double best = 0.0;
            for (std::size_t i = 0; i < f.xs.size(); ++i)
              best = std::max(best, std::abs(f.ys[i]) - eps * std::abs(f.xs[i]));
            if (f.xs.front() <= 0.0 && f.xs.back() >= 0.0) {
              const NonlinearitySpec self{f};
              best = std::max(best, std::abs(self(0.0)));
            }
            return 1.01 * best;
          }
        },
        v_);
  }

  std::string canonical() const {
    std::string out = std::visit(
        [](const auto& f) -> std::string {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, SignedPower>) {
            return "f.signed_power(alpha=" + format_double(f.alpha) + ")";
          } else if constexpr (std::is_same_v<T, BoundedRamp>) {
            return "f.bounded(bound=" + format_double(f.bound) + ",slope=" + format_double(f.slope) + ")";
          } else {
            return "f.table(xs=" + format_list(f.xs) + ",ys=" + format_list(f.ys) + ")";
          }
        },
        v_);
    if (envelope_)
      out += "+phi(scale=" + format_double(envelope_->scale) + ",exponent=" + format_double(envelope_->exponent) +
             ",x0=" + format_double(envelope_->x0) + ")";
    return out;
  }

 private:
  static void validate(const SignedPower& f) {
    if (!(f.alpha > 0.0 && f.alpha < 1.0)) throw ArgumentError("signed-power nonlinearity requires alpha in (0,1)");
  }
  static void validate(const BoundedRamp& f) {
    if (!(f.bound >= 0.0) || !std::isfinite(f.bound)) throw ArgumentError("bounded nonlinearity requires M >= 0");
    if (!(f.slope > 0.0) || !std::isfinite(f.slope)) throw ArgumentError("bounded nonlinearity requires slope > 0");
  }
  static void validate(const TableNonlinearity& f) {
    if (f.xs.size() < 2 || f.xs.size() != f.ys.size())
      throw ArgumentError("table nonlinearity needs at least two (x, f(x)) pairs of equal length");
    for (std::size_t i = 0; i < f.xs.size(); ++i) {
      if (!std::isfinite(f.xs[i]) || !std::isfinite(f.ys[i])) throw ArgumentError("table entries must be finite");
      if (i && !(f.xs[i] > f.xs[i - 1])) throw ArgumentError("table x values must be strictly increasing");
    }
  }

  // Envelope must be increasing with phi(u)/u nonincreasing, and |f(x)| <= 1.01 phi(|x|) beyond x0.
  void validate_envelope() const {
    const Envelope& e = *envelope_;
    if (!(e.scale > 0.0) || !(e.exponent > 0.0 && e.exponent <= 1.0) || !(e.x0 >= 0.0))
      throw ArgumentError("envelope requires scale > 0, exponent in (0,1] and x0 >= 0");
    double lo = std::max(e.x0, 1e-12);
    double hi = 1e12;
    if (const auto* t = std::get_if<TableNonlinearity>(&v_)) {
      hi = std::min(hi, std::max(std::abs(t->xs.front()), std::abs(t->xs.back())));
    }
    for (double u = lo; u <= hi; u *= 1.1) {
      for (double x : {u, -u}) {
        double fx = 0.0;
        try {
          fx = (*this)(x);
        } catch (const DomainError&) {
          continue;
        }
        if (std::abs(fx) > 1.01 * e(u))
          throw ArgumentError("envelope does not dominate |f| beyond x0 at x=" + format_double(x));
      }
    }
  }

  Variant v_;
  std::optional<Envelope> envelope_;
};

inline double eval_f(const NonlinearitySpec& f, double x) {
  if (!std::isfinite(x)) throw ArgumentError("eval_f requires a finite argument");
  return f(x);
}

inline double sublinearity_bound_F(const NonlinearitySpec& f, double eps) { return f.sublinearity_bound(eps); }

// ---------------------------------------------------------------------------
// ScalerSpec
// ---------------------------------------------------------------------------

/// a(n) = scale * sqrt(2 log n), n >= 2.
struct SqrtLogScaler {
  double scale = 1.0;
};

/// a(n) = scale * n^p, n >= 1.
struct PowerScaler {
  double p = 1.0;
  double scale = 1.0;
};

/// a(n) = exp(a n).
struct ExponentialScaler {
  double a = 1.0;
};

struct TableScaler {
  RealSeq values;
};

/// Increasing, diverging auxiliary sequence a(n).
class ScalerSpec {
 public:
  using Variant = std::variant<SqrtLogScaler, PowerScaler, ExponentialScaler, TableScaler>;

  ScalerSpec() : ScalerSpec(SqrtLogScaler{}) {}

  explicit ScalerSpec(Variant v) : v_(std::move(v)) {
    std::visit([](const auto& s) { validate(s); }, v_);
  }

  static ScalerSpec sqrt_log(double scale = 1.0) { return ScalerSpec(SqrtLogScaler{scale}); }
  static ScalerSpec power(double p, double scale = 1.0) { return ScalerSpec(PowerScaler{p, scale}); }
  static ScalerSpec exponential(double a) { return ScalerSpec(ExponentialScaler{a}); }
  static ScalerSpec table(RealSeq values) { return ScalerSpec(TableScaler{std::move(values)}); }

  const Variant& variant() const noexcept { return v_; }

  /// First index at which a(n) is defined.
  std::int64_t first_index() const {
    return std::visit(
        [](const auto& s) -> std::int64_t {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SqrtLogScaler>) return 2;
          else if constexpr (std::is_same_v<T, PowerScaler>) return 1;
          else if constexpr (std::is_same_v<T, ExponentialScaler>) return 0;
          else return s.values.first();
        },
        v_);
  }

  bool defined_at(std::int64_t n) const {
    if (n < first_index()) return false;
    if (const auto* t = std::get_if<TableScaler>(&v_)) return t->values.contains(n);
    return true;
  }

  double operator()(std::int64_t n) const {
    if (!defined_at(n)) throw DomainError("scaler undefined at n=" + std::to_string(n));
    const double x = static_cast<double>(n);
    return std::visit(
        [x, n](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SqrtLogScaler>) return s.scale * std::sqrt(2.0 * std::log(x));
          else if constexpr (std::is_same_v<T, PowerScaler>) return s.scale * std::pow(x, s.p);
          else if constexpr (std::is_same_v<T, ExponentialScaler>) return std::exp(s.a * x);
          else return s.values[n];
        },
        v_);
  }

  std::string canonical() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SqrtLogScaler>) return "a.sqrt_log(scale=" + format_double(s.scale) + ")";
          else if constexpr (std::is_same_v<T, PowerScaler>)
            return "a.power(p=" + format_double(s.p) + ",scale=" + format_double(s.scale) + ")";
          else if constexpr (std::is_same_v<T, ExponentialScaler>) return "a.exponential(a=" + format_double(s.a) + ")";
          else return "a.table(start=" + std::to_string(s.values.start) + ",values=" + format_list(s.values.values) + ")";
        },
        v_);
  }

 private:
  static void validate(const SqrtLogScaler& s) {
    if (!(s.scale > 0.0) || !std::isfinite(s.scale)) throw ArgumentError("sqrt-log scaler requires scale > 0");
  }
  static void validate(const PowerScaler& s) {
    if (!(s.p > 0.0) || !std::isfinite(s.p)) throw ArgumentError("power scaler requires p > 0");
    if (!(s.scale > 0.0) || !std::isfinite(s.scale)) throw ArgumentError("power scaler requires scale > 0");
  }
  static void validate(const ExponentialScaler& s) {
    if (!(s.a > 0.0) || !std::isfinite(s.a)) throw ArgumentError("exponential scaler requires a > 0");
  }
  static void validate(const TableScaler& s) {
    if (s.values.empty()) throw ArgumentError("table scaler must be nonempty");
    double prev = 0.0;
    for (double v : s.values.values) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError("table scaler values must be positive and finite");
      if (v < prev) throw ArgumentError("table scaler values must be nondecreasing");
      prev = v;
    }
  }

  Variant v_;
};

inline double eval_scaler(const ScalerSpec& a, std::int64_t n) { return a(n); }

}  // namespace volterra
