#pragma once

// Deterministic inequalities every solution path must satisfy, checked index
// by index. They follow from |f(x)| <= F(eps) + eps|x| and the recursion
// alone, so any violation points at a solver bug rather than slow convergence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "volterra/engine.hpp"
#include "volterra/seqcore.hpp"

namespace volterra {

inline constexpr double kPathwiseRelSlack = 1e-10;

struct InequalityCheck {
  std::string name;
  double eps = 0.0;  ///< 0 for checks without an eps parameter
  std::int64_t checked = 0;
  std::int64_t violations = 0;
  std::int64_t first_violation = -1;
  double worst_excess = 0.0;  ///< max (lhs - rhs) / max(1, |rhs|) over violations
};

struct PathwiseReport {
  std::vector<InequalityCheck> checks;

  std::int64_t total_violations() const {
    std::int64_t v = 0;
    for (const auto& c : checks) v += c.violations;
    return v;
  }
};

/// The eps values actually used: the requested list, plus 1/(2|k|_1) for the
/// upper estimate, which needs eps|k|_1 < 1.
inline std::vector<double> pathwise_eps(const KernelSpec& k, const std::vector<double>& requested) {
  std::vector<double> out = requested;
  const double l1 = k.l1();
  if (l1 > 0.0) out.push_back(0.5 / l1);
  return out;
}

inline PathwiseReport check_pathwise_bounds(const Path& path, const KernelSpec& kernel, const NonlinearitySpec& f,
                                            const std::vector<double>& eps_list = {0.5, 0.1, 0.01}) {
  const std::int64_t N = path.horizon();
  const double l1 = kernel.l1();
  const double err = path.s_error_bound;
  PathwiseReport report;

  auto record = [](InequalityCheck& c, std::int64_t n, double lhs, double rhs, double slack) {
    ++c.checked;
    if (lhs > rhs + slack + kPathwiseRelSlack * std::abs(rhs)) {
      if (c.violations == 0) c.first_violation = n;
      ++c.violations;
      c.worst_excess = std::max(c.worst_excess, (lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
  };

  // x*(n), H*(n), S*(n) and signed maxima, built incrementally.
  std::vector<double> xstar(static_cast<std::size_t>(N + 1));
  {
    double m = 0.0;
    for (std::int64_t n = 0; n <= N; ++n) xstar[static_cast<std::size_t>(n)] = m = std::max(m, std::abs(path.x[n]));
  }

  for (double eps : pathwise_eps(kernel, eps_list)) {
    const double F = f.sublinearity_bound(eps);
    InequalityCheck sest{"S-estimate", eps};
    InequalityCheck key2{"forcing-lower-estimate", eps};
    for (std::int64_t n = 0; n < N; ++n) {
      const double xs = xstar[static_cast<std::size_t>(n)];
      record(sest, n, std::abs(path.s[n]), l1 * F + eps * l1 * xs, err);
      const std::int64_t m = n + 1;
      record(key2, m, std::abs(path.h[m]), (1.0 + eps * l1) * xstar[static_cast<std::size_t>(m)] + l1 * F,
             kPathwiseRelSlack * xstar[static_cast<std::size_t>(m)] + err);
    }
    report.checks.push_back(sest);
    report.checks.push_back(key2);

    if (eps * l1 < 1.0) {
      InequalityCheck upper{"x-star-upper-estimate", eps};
      double hstar = 0.0;
      for (std::int64_t n = 1; n <= N; ++n) {
        hstar = std::max(hstar, std::abs(path.h[n]));
        const double denom = 1.0 - eps * l1;
        record(upper, n, xstar[static_cast<std::size_t>(n)], (std::abs(path.x[0]) + l1 * F + hstar) / denom,
               2.0 * err / denom);
      }
      report.checks.push_back(upper);
    }
  }

  // Signed bounds: x(l) = H(l) + S(l-1) gives |x(l) - H(l)| <= S*(n-1) for l <= n.
  InequalityCheck plus_lo{"x-plus-lower"}, minus_lo{"x-minus-lower"}, minus_hi{"x-minus-upper"},
      plus_hi{"x-plus-upper"};
  double sstar = 0.0, hp = -INFINITY, hm = -INFINITY;
  double xp = path.x[0], xm = -path.x[0];
  double xp1 = -INFINITY, xm1 = -INFINITY;
  for (std::int64_t n = 1; n <= N; ++n) {
    sstar = std::max(sstar, std::abs(path.s[n - 1]));
    hp = std::max(hp, path.h[n]);
    hm = std::max(hm, -path.h[n]);
    xp = std::max(xp, path.x[n]);
    xm = std::max(xm, -path.x[n]);
    xp1 = std::max(xp1, path.x[n]);
    xm1 = std::max(xm1, -path.x[n]);
    const double slack = kPathwiseRelSlack * std::max({1.0, std::abs(hp), std::abs(hm), sstar}) + err;
    record(plus_lo, n, hp - sstar, xp, slack);
    record(minus_lo, n, hm - sstar, xm, slack);
    record(minus_hi, n, xm1, hm + sstar, slack);
    record(plus_hi, n, xp1, hp + sstar, slack);
  }
  report.checks.push_back(plus_lo);
  report.checks.push_back(minus_lo);
  report.checks.push_back(minus_hi);
  report.checks.push_back(plus_hi);
  return report;
}

}  // namespace volterra
