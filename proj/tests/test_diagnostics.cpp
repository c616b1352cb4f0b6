#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "volterra/diagnostics.hpp"

using namespace volterra;

namespace {

RealSeq from_fn(std::int64_t N, double (*fn)(double)) {
  std::vector<double> v(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n <= N; ++n) v[static_cast<std::size_t>(n - 1)] = fn(static_cast<double>(n));
  return RealSeq::from_one(std::move(v));
}

}  // namespace

TEST(Stats, MedianAndTail) {
  EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_TRUE(std::isnan(median({})));
  EXPECT_EQ(tail_count(100, 0.1), 10);
  EXPECT_EQ(tail_count(5, 0.01), 1);
  const auto s = summarize_tail(RealSeq::from_one({9.0, 1.0, NAN, 3.0}), 0.75);
  EXPECT_EQ(s.count, 2);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
}

TEST(RunningMax, ValuesAndEarliestArgmax) {
  const auto t = running_max_abs(RealSeq::from_one({1.0, -3.0, 2.0, 3.0, -5.0}));
  EXPECT_EQ(t.values.values, (std::vector<double>{1, 3, 3, 3, 5}));
  EXPECT_EQ(t.argmax_times, (std::vector<std::int64_t>{1, 2, 2, 2, 5}));
  EXPECT_EQ(t.record_times(), (std::vector<std::int64_t>{1, 2, 5}));
  EXPECT_THROW(running_max_abs(RealSeq::from_one({})), ArgumentError);
}

TEST(RunningMax, SignedSides) {
  const auto s = RealSeq::from_one({-1.0, 2.0, -4.0, 1.0});
  EXPECT_EQ(running_signed_max(s, Side::Plus).values.values, (std::vector<double>{-1, 2, 2, 2}));
  EXPECT_EQ(running_signed_max(s, Side::Minus).values.values, (std::vector<double>{1, 1, 4, 4}));
}

TEST(RunningMax, InvariantsOnRandomSequences) {
  std::mt19937_64 gen(42);
  std::cauchy_distribution<double> d;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(500);
    for (auto& x : v) x = d(gen);
    const auto seq = RealSeq::from_one(v);
    const auto t = running_max_abs(seq);
    for (std::int64_t n = 1; n <= 500; ++n) {
      const auto arg = t.argmax_at(n);
      ASSERT_LE(arg, n);
      ASSERT_EQ(t.values[n], std::abs(seq[arg]));
      if (n > 1) {
        ASSERT_GE(t.values[n], t.values[n - 1]);
      }
      for (std::int64_t m = 1; m < arg; ++m) ASSERT_LT(std::abs(seq[m]), t.values[n]);
      ASSERT_GE(t.values[n], std::abs(seq[n]));
    }
  }
}

TEST(Ratio, GapsAtTinyDenominators) {
  const auto r = ratio_track(RealSeq::from_one({1.0, 2.0, 3.0}), RealSeq::from_one({0.0, 1.0, 2.0}));
  EXPECT_EQ(r.gaps, 1);
  EXPECT_FALSE(r.all_gaps);
  EXPECT_TRUE(std::isnan(r.values[1]));
  EXPECT_DOUBLE_EQ(r.values[3], 1.5);
  EXPECT_TRUE(ratio_track(RealSeq::from_one({1.0}), RealSeq::from_one({0.0})).all_gaps);
  EXPECT_THROW(ratio_track(RealSeq::from_one({1.0}), RealSeq::from_one({1.0, 2.0})), ArgumentError);
}

TEST(Divergence, SlowPowerGrowthIsDetected) {
  const auto up = detect_divergence(from_fn(100000, [](double n) { return std::pow(n, 0.2); }));
  EXPECT_TRUE(up.divergent);
  EXPECT_NEAR(up.slope, 0.2, 0.02);
  const auto flat = detect_divergence(from_fn(100000, [](double n) { return 2.0 + 1.0 / n; }));
  EXPECT_FALSE(flat.divergent);
  EXPECT_NEAR(flat.slope, 0.0, 0.01);
  EXPECT_FALSE(detect_divergence(from_fn(50, [](double n) { return n; })).divergent);  // one window only
}

TEST(Lambda, AlternatingUnitRatio) {
  // H(n) = (-1)^n n has equal signed maxima up to one index.
  const auto e = estimate_lambda(from_fn(100000, [](double n) { return std::fmod(n, 2.0) == 0.0 ? n : -n; }));
  EXPECT_EQ(e.regime, LimitRegime::Finite);
  EXPECT_NEAR(e.final, 1.0, 1e-3);
}

TEST(Lambda, AsymmetricAndInfinite) {
  const auto two = estimate_lambda(from_fn(100000, [](double n) { return std::fmod(n, 2.0) == 0.0 ? n : -2.0 * n; }));
  EXPECT_NEAR(two.final, 2.0, 1e-3);
  const auto inf =
      estimate_lambda(from_fn(100000, [](double n) { return std::fmod(n, 2.0) == 0.0 ? std::sqrt(n) : -n; }));
  EXPECT_EQ(inf.regime, LimitRegime::PlusInfinity);
  EXPECT_TRUE(std::isinf(inf.final));
  EXPECT_THROW(estimate_lambda(RealSeq::from_one({0.0, 0.0})), DegenerateInputError);
}

TEST(Lambda, SecondRatioUsesNonlinearity) {
  // H*_-(n) = 3 sqrt(n), f(H*_+(n)) = sqrt(n).
  const auto H = from_fn(100000, [](double n) { return std::fmod(n, 2.0) == 0.0 ? n : -3.0 * std::sqrt(n); });
  const auto e = estimate_lambda2(H, NonlinearitySpec::signed_power(0.5));
  EXPECT_NEAR(e.final, 3.0, 1e-3);
}

TEST(Sups, ScaledTailAndLogExponent) {
  const auto s = from_fn(1000, [](double n) { return 2.0 * n; });
  EXPECT_DOUBLE_EQ(tail_sup_ratio(s, ScalerSpec::power(1.0)), 2.0);
  EXPECT_NEAR(log_exponent_sup(from_fn(10000, [](double n) { return std::sqrt(n); }), 1000), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(final_window_sup(RealSeq::from_one({5.0, 1.0, 2.0}), 2), 2.0);
  EXPECT_THROW(tail_sup_ratio(s, ScalerSpec::power(1.0), 0.0), ArgumentError);
  const auto track = scaled_running_sup(s, ScalerSpec::power(1.0));
  EXPECT_DOUBLE_EQ(track.values.back(), 2.0);
  const auto signs = RealSeq::from_one({3.0, -10.0});
  EXPECT_DOUBLE_EQ(tail_sup_ratio(signs, ScalerSpec::power(1.0), 1.0, SupKind::Pos), 3.0);
  EXPECT_DOUBLE_EQ(tail_sup_ratio(signs, ScalerSpec::power(1.0), 1.0, SupKind::Neg), 5.0);
}

TEST(Sups, LambdaResidual) {
  const auto s = from_fn(10, [](double n) { return n * (1.0 + 0.5 * std::fmod(n, 2.0)); });
  const auto L = from_fn(10, [](double n) { return 1.0 + 0.5 * std::fmod(n, 2.0); });
  const auto r = lambda_a_residual(s, ScalerSpec::power(1.0), L);
  for (double v : r.values) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(PhiAverage, PowerAndOverflow) {
  const auto s = RealSeq::from_one({2.0, -2.0, 2.0});
  EXPECT_EQ(phi_time_average(s, ConvexWeightSpec::power(1.0)).values, (std::vector<double>{2, 2, 2}));
  EXPECT_DOUBLE_EQ(pth_moment_track(s, 2.0).values.back(), 4.0);
  EXPECT_DOUBLE_EQ(phi_time_average(s, ConvexWeightSpec::power(1.0, 0.5)).values.back(), 3.0);
  try {
    phi_time_average(RealSeq::from_one({1.0, 40.0}), ConvexWeightSpec::gaussian_exp(1.0));
    FAIL();
  } catch (const OverflowError& e) {
    EXPECT_EQ(e.index(), 2);
  }
  EXPECT_THROW(pth_moment_track(s, 0.5), ArgumentError);
  EXPECT_THROW(ConvexWeightSpec::gaussian_exp(-1.0), ArgumentError);
}
