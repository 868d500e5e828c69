#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "astar/errors.hpp"
#include "astar/numerics.hpp"
#include "astar/random_stream.hpp"
#include "astar/statistics.hpp"

using namespace astar;

TEST(Integrate, Polynomials) {
  EXPECT_NEAR(numerics::integrate([](double x) { return x * x; }, 0.0, 1.0), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(numerics::integrate([](double x) { return std::pow(x, 7) - 2 * x; }, -1.0, 2.0),
              (256.0 - 1.0) / 8.0 - 3.0, 1e-8);
}

TEST(Integrate, SmoothTranscendental) {
  EXPECT_NEAR(numerics::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi), 2.0,
              1e-9);
  EXPECT_NEAR(numerics::integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-6, 1.0),
              2.0 - 2e-3, 1e-7);
}

TEST(Integrate, JumpAtBreakIsExact) {
  auto step = [](double x) { return x < 0.3 ? 1.0 : 5.0; };
  const std::vector<double> breaks{0.3};
  EXPECT_NEAR(numerics::integrate(step, 0.0, 1.0, 1e-12, breaks), 0.3 + 3.5, 1e-12);
}

TEST(Integrate, EmptyAndReversedRange) {
  EXPECT_EQ(numerics::integrate([](double) { return 1.0; }, 0.5, 0.5), 0.0);
}

TEST(BisectBoundary, ReturnsInsidePoint) {
  auto inside = [](double x) { return x <= 0.123456789; };
  const double b = numerics::bisect_boundary(inside, 0.0, 1.0);
  EXPECT_TRUE(inside(b));
  EXPECT_NEAR(b, 0.123456789, 1e-12);
  const double c = numerics::bisect_boundary([](double x) { return x >= 0.75; }, 1.0, 0.0);
  EXPECT_GE(c, 0.75);
  EXPECT_NEAR(c, 0.75, 1e-12);
}

TEST(GoldenSection, FindsExtrema) {
  EXPECT_NEAR(numerics::golden_section_argmin([](double x) { return (x - 0.3) * (x - 0.3); }, 0, 1),
              0.3, 1e-8);
  EXPECT_NEAR(numerics::golden_section_argmax([](double x) { return -std::abs(x - 0.81); }, 0, 1),
              0.81, 1e-8);
}

TEST(Statistics, SummaryMatchesHandComputation) {
  const std::vector<double> v{1, 2, 3, 4};
  const auto s = stats::summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.se, std::sqrt((2.25 * 2 + 0.25 * 2) / 3.0 / 4.0), 1e-15);
  EXPECT_EQ(s.count, 4u);
}

TEST(Statistics, KsCriticalValues) {
  EXPECT_NEAR(stats::ks_critical_one_sample(100000), 0.00617, 1e-5);
  EXPECT_NEAR(stats::ks_critical_two_sample(100000, 100000), 0.008718, 5e-6);
}

TEST(Statistics, KsOneSampleUniformSmall) {
  // Sample {0.5}: sup |F_n - F| = 0.5.
  EXPECT_DOUBLE_EQ(stats::ks_one_sample({0.5}, [](double x) { return x; }), 0.5);
  Xoshiro256Stream rng(5);
  std::vector<double> u(50000);
  for (double& x : u) x = rng.uniform();
  EXPECT_LT(stats::ks_one_sample(u, [](double x) { return x; }), stats::ks_critical_one_sample(u.size()));
  for (double& x : u) x *= 0.5;
  EXPECT_GT(stats::ks_one_sample(u, [](double x) { return x; }), 0.4);
}

TEST(Statistics, KsTwoSampleHandlesTies) {
  EXPECT_EQ(stats::ks_two_sample({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(stats::ks_two_sample({1, 1, 1}, {2, 2, 2}), 1.0);
  EXPECT_DOUBLE_EQ(stats::ks_two_sample({1, 2}, {2, 3}), 0.5);
}

TEST(Statistics, WilsonInterval) {
  const auto ci = stats::wilson_interval(0, 100, 3.0);
  EXPECT_EQ(ci.estimate, 0.0);
  EXPECT_EQ(ci.lower, 0.0);
  EXPECT_NEAR(ci.upper, 9.0 / 109.0, 1e-12);
  const auto mid = stats::wilson_interval(50, 100, 3.0);
  EXPECT_LT(mid.lower, 0.5);
  EXPECT_GT(mid.upper, 0.5);
  EXPECT_NEAR(mid.lower + mid.upper, 1.0, 1e-12);
  EXPECT_THROW(stats::wilson_interval(0, 0), ParameterError);
}

TEST(Statistics, LeastSquaresExactLine) {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const std::vector<double> se{0.1, 0.1, 0.1, 0.1};
  const auto fit = stats::least_squares(x, y, se);
  EXPECT_NEAR(fit.slope, 2.0, 1e-14);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-14);
  EXPECT_NEAR(fit.slope_se, 0.1 / std::sqrt(5.0), 1e-14);
  EXPECT_THROW(stats::least_squares(std::vector<double>{1.0}, std::vector<double>{1.0}), ParameterError);
}

TEST(RandomStream, DeterministicAndSplittable) {
  Xoshiro256Stream a(42);
  Xoshiro256Stream b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());

  const Xoshiro256Stream root(42);
  auto c0 = root.child(0);
  auto c0_again = root.child(0);
  auto c1 = root.child(1);
  EXPECT_EQ(c0.next_u64(), c0_again.next_u64());
  EXPECT_NE(root.child(0).next_u64(), c1.next_u64());
  auto via_split = root.split(1);
  EXPECT_EQ(via_split->next_u64(), root.child(1).next_u64());
}

TEST(RandomStream, ChildDoesNotAdvanceParent) {
  Xoshiro256Stream a(7);
  Xoshiro256Stream b(7);
  (void)a.child(3);
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, UniformRanges) {
  Xoshiro256Stream rng(9);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    const double v = rng.uniform_open();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
    sum += rng.exponential();
  }
  EXPECT_NEAR(sum / 100000, 1.0, 0.015);
}

TEST(RandomStream, SiblingStreamsLookIndependent) {
  const Xoshiro256Stream root(1234);
  auto a = root.child(0);
  auto b = root.child(1);
  const int n = 100000;
  double sab = 0.0;
  for (int i = 0; i < n; ++i) sab += (a.uniform() - 0.5) * (b.uniform() - 0.5);
  // Correlation of independent uniforms: sd of the estimate is 1/sqrt(n).
  EXPECT_LT(std::abs(sab / n * 12.0), 4.0 / std::sqrt(n));
}
