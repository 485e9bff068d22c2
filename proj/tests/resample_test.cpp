#include "biasshift/resample.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "biasshift/error.hpp"
#include "oracles.hpp"

namespace biasshift {
namespace {

// Alternating -1/+1 scores: exactly half positive at t = 0.
std::vector<double> half_positive(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (i % 2) ? 1.0 : -1.0;
  return v;
}

const ScoreTable& population() {
  static const ScoreTable t(SplitTag::Kind::val, {"a"}, {half_positive(1000000)});
  return t;
}

const DecisionRule& zero_rule() {
  static const DecisionRule r = DecisionRule::uniform({"a"}, 0.0);
  return r;
}

// sqrt(2/pi) * sqrt(0.25 / n), the mean of a folded normal with that SE.
constexpr double kFolded100 = 0.0398942280401433;
constexpr double kFolded1000 = 0.0126156626101008;
constexpr double kFolded10000 = 0.00398942280401433;

TEST(Bootstrap, AllPositiveHasNoSpread) {
  const std::vector<double> v(500, 2.0);
  const auto ci = bootstrap_proportion_ci(v, 0.0, 100, 1);
  EXPECT_EQ(ci.mean, 1.0);
  EXPECT_EQ(ci.standard_error, 0.0);
  EXPECT_EQ(ci.half_width, 0.0);
}

TEST(Bootstrap, BinomialStandardError) {
  const auto ci = bootstrap_proportion_ci(half_positive(10000), 0.0, 1000, 7);
  EXPECT_NEAR(ci.standard_error, 0.005, 0.15 * 0.005);
  EXPECT_NEAR(ci.mean, 0.5, 0.001);
  EXPECT_DOUBLE_EQ(ci.half_width, 1.96 * ci.standard_error);
}

TEST(Bootstrap, Deterministic) {
  const auto v = oracle::normal_draws(3000, 0.2, 1.0, 4);
  const auto a = bootstrap_proportion_ci(v, 0.0, 200, 99, 3, Execution::parallel);
  EXPECT_EQ(a, bootstrap_proportion_ci(v, 0.0, 200, 99, 3, Execution::parallel));
  EXPECT_EQ(a, bootstrap_proportion_ci(v, 0.0, 200, 99, 3, Execution::serial));
  EXPECT_NE(a, bootstrap_proportion_ci(v, 0.0, 200, 100, 3));
  EXPECT_NE(a, bootstrap_proportion_ci(v, 0.0, 200, 99, 4));
}

TEST(Bootstrap, Preconditions) {
  EXPECT_THROW(bootstrap_proportion_ci(std::vector<double>{}, 0.0, 10, 0), std::invalid_argument);
  EXPECT_THROW(bootstrap_proportion_ci(std::vector<double>{1.0}, 0.0, 1, 0),
               std::invalid_argument);
}

TEST(SamplingCurve, FullSizeIsExactlyZero) {
  const ScoreTable t(SplitTag::Kind::val, {"a", "b"},
                     {oracle::normal_draws(777, 0, 1, 1), oracle::normal_draws(777, 1, 1, 2)});
  ResamplePlan plan{{777}, 20, 5};
  const auto curve = sampling_error_curve(t, DecisionRule::uniform({"a", "b"}, 0.0), plan);
  ASSERT_EQ(curve.size(), 1u);
  EXPECT_EQ(curve[0].mean_abs, 0.0);
  EXPECT_EQ(curve[0].std_abs, 0.0);
}

TEST(SamplingCurve, FoldedNormalOracle) {
  // The closed forms agree with a direct binomial Monte Carlo.
  EXPECT_NEAR(oracle::mc_mean_abs_deviation(0.5, 1000, 200000, 1), kFolded1000, 0.02 * kFolded1000);
  EXPECT_NEAR(oracle::mc_mean_abs_deviation(0.5, 10000, 200000, 2), kFolded10000,
              0.02 * kFolded10000);
  EXPECT_NEAR(std::sqrt(2.0 / M_PI) * std::sqrt(0.25 / 100.0), kFolded100, 1e-15);

  ResamplePlan plan{{100, 1000, 10000}, 100, 0};
  const auto curve = sampling_error_curve(population(), zero_rule(), plan);
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_NEAR(curve[0].mean_abs, kFolded100, 0.25 * kFolded100);
  EXPECT_NEAR(curve[1].mean_abs, kFolded1000, 0.25 * kFolded1000);
  EXPECT_NEAR(curve[2].mean_abs, kFolded10000, 0.25 * kFolded10000);
}

TEST(SamplingCurve, ShrinksLikeInverseRoot) {
  ResamplePlan plan{{100, 300, 1000, 3000, 10000}, 100, 3};
  const auto curve = sampling_error_curve(population(), zero_rule(), plan);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double noise = curve[i - 1].std_abs / std::sqrt(100.0);
    EXPECT_LE(curve[i].mean_abs, curve[i - 1].mean_abs + noise) << "size " << curve[i].size;
  }
  const std::vector<double> x{std::log(100.0), std::log(1000.0), std::log(10000.0)};
  const std::vector<double> y{std::log(curve[0].mean_abs), std::log(curve[2].mean_abs),
                              std::log(curve[4].mean_abs)};
  const double mx = (x[0] + x[1] + x[2]) / 3.0;
  const double my = (y[0] + y[1] + y[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  EXPECT_GE(slope, -0.6);
  EXPECT_LE(slope, -0.4);
}

TEST(SamplingCurve, DeterministicAcrossExecution) {
  const ScoreTable t(SplitTag::Kind::val, {"a", "b", "c"},
                     {oracle::normal_draws(5000, 0, 1, 1), oracle::normal_draws(5000, 1, 1, 2),
                      oracle::normal_draws(5000, -1, 2, 3)});
  const auto rule = DecisionRule::uniform({"a", "b", "c"}, 0.0);
  ResamplePlan plan{{10, 100, 4000}, 30, 12};
  const auto a = sampling_error_curve(t, rule, plan, Execution::parallel);
  EXPECT_EQ(a, sampling_error_curve(t, rule, plan, Execution::parallel));
  EXPECT_EQ(a, sampling_error_curve(t, rule, plan, Execution::serial));

  std::ostringstream x, y;
  write_curve_csv(a, x);
  write_curve_csv(sampling_error_curve(t, rule, plan), y);
  EXPECT_EQ(x.str(), y.str());
  EXPECT_EQ(x.str().rfind("size,mean_abs,std\n", 0), 0u);
}

TEST(SamplingCurve, SizeAbovePopulation) {
  const ScoreTable t(SplitTag::Kind::val, {"a"}, {{0.0, 1.0, 2.0}});
  ResamplePlan plan{{2, 4}, 10, 0};
  EXPECT_THROW(sampling_error_curve(t, DecisionRule::uniform({"a"}, 0.0), plan), InputError);
}

TEST(ResamplePlanTest, Validation) {
  EXPECT_THROW((ResamplePlan{{}, 10, 0}.validate()), InputError);
  EXPECT_THROW((ResamplePlan{{0}, 10, 0}.validate()), InputError);
  EXPECT_THROW((ResamplePlan{{5}, 1, 0}.validate()), InputError);
  EXPECT_NO_THROW((ResamplePlan{{5}, 2, 0}.validate()));
}

TEST(PositiveFlagsTest, CountsUnderRule) {
  const ScoreTable t(SplitTag::Kind::val, {"a", "b"}, {{-1, 0, 1}, {5, 6, 7}});
  const auto flags = positive_flags(t, DecisionRule::uniform({"a", "b"}, 0.0, {{"b", 6.5}}));
  EXPECT_EQ(flags.totals, (std::vector<std::uint64_t>{2, 1}));
  EXPECT_EQ(flags.column(1)[2], 1);
  EXPECT_EQ(flags.column(1)[1], 0);
}

}  // namespace
}  // namespace biasshift
