#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "astar/errors.hpp"
#include "astar/gumbel.hpp"
#include "astar/random_stream.hpp"
#include "astar/statistics.hpp"

using namespace astar;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Composite trapezoid rule, deliberately unrelated to the library quadrature.
template <class F>
double trapezoid(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

TruncatedGumbelParams params_for(double mu, double kappa) {
  return std::isinf(kappa) ? TruncatedGumbelParams::untruncated(mu)
                           : TruncatedGumbelParams::truncated(mu, kappa);
}

}  // namespace

TEST(TruncatedGumbelParams, InfiniteTruncationIsTheSentinel) {
  const auto p = TruncatedGumbelParams::truncated(0.0, kInf);
  EXPECT_FALSE(p.is_truncated());
  EXPECT_TRUE(TruncatedGumbelParams::truncated(0.0, -3.0).is_truncated());
}

TEST(TruncatedGumbelParams, RejectsBadArguments) {
  EXPECT_THROW(TruncatedGumbelParams::untruncated(kInf), ParameterError);
  EXPECT_THROW(TruncatedGumbelParams::untruncated(std::nan("")), ParameterError);
  EXPECT_THROW(TruncatedGumbelParams::truncated(0.0, -kInf), ParameterError);
  EXPECT_THROW(TruncatedGumbelParams::truncated(0.0, std::nan("")), ParameterError);
}

TEST(ExpRaceState, MapsLocationAndTruncation) {
  const auto s = ExpRaceState::from(TruncatedGumbelParams::truncated(std::log(3.0), 2.0));
  EXPECT_NEAR(s.rate, 3.0, 1e-15);
  EXPECT_NEAR(s.offset, std::exp(-2.0), 1e-15);
  EXPECT_EQ(ExpRaceState::from(TruncatedGumbelParams::untruncated(0.0)).offset, 0.0);
}

TEST(SampleTgExp, StandardGumbelMeanMatchesQuadratureOracle) {
  const double oracle =
      trapezoid([](double g) { return g * std::exp(-g - std::exp(-g)); }, -8.0, 60.0, 400000);
  EXPECT_NEAR(oracle, 0.5772156649015329, 1e-9);

  Xoshiro256Stream rng(11);
  const auto p = TruncatedGumbelParams::untruncated(0.0);
  std::vector<double> draws(1000000);
  for (double& d : draws) d = sample_tg_exp(p, rng);
  const auto s = stats::summarize(draws);
  EXPECT_LE(std::abs(s.mean - oracle), 3.0 * s.se);
}

TEST(SampleTgExp, CdfAtZeroForLocationLogTwo) {
  Xoshiro256Stream rng(12);
  const auto p = TruncatedGumbelParams::untruncated(std::log(2.0));
  const int n = 1000000;
  int below = 0;
  for (int i = 0; i < n; ++i) below += sample_tg_exp(p, rng) <= 0.0;
  const double expected = std::exp(-2.0);
  const double freq = static_cast<double>(below) / n;
  EXPECT_LE(std::abs(freq - expected), 3.0 * std::sqrt(expected * (1 - expected) / n));
}

TEST(SampleTgExp, TruncationIsHard) {
  Xoshiro256Stream rng(13);
  for (double kappa : {0.0, -1.0, 5.0, -700.0}) {
    for (double mu : {-2.0, 0.0, 2.0, 30.0}) {
      const auto p = TruncatedGumbelParams::truncated(mu, kappa);
      for (int i = 0; i < 20000; ++i) ASSERT_LE(sample_tg_exp(p, rng), kappa);
    }
  }
}

TEST(SampleTgExp, DeepNegativeTruncationStaysFinite) {
  Xoshiro256Stream rng(14);
  const auto p = TruncatedGumbelParams::truncated(-40.0, -900.0);
  for (int i = 0; i < 1000; ++i) {
    const double g = sample_tg_exp(p, rng);
    ASSERT_TRUE(std::isfinite(g));
    ASSERT_LE(g, -900.0);
  }
}

TEST(SampleTgInvcdf, KnownQuantiles) {
  const auto std_gumbel = TruncatedGumbelParams::untruncated(0.0);
  EXPECT_NEAR(sample_tg_invcdf(std_gumbel, std::exp(-1.0)), 0.0, 1e-15);
  EXPECT_NEAR(sample_tg_invcdf(std_gumbel, 0.5), -std::log(std::log(2.0)), 1e-14);
  EXPECT_NEAR(sample_tg_invcdf(std_gumbel, 0.5), 0.36651292058166435, 1e-14);

  const auto at_zero = TruncatedGumbelParams::truncated(0.0, 0.0);
  double prev = -kInf;
  for (double u : {0.9, 0.99, 0.999999, 1.0 - 1e-15}) {
    const double g = sample_tg_invcdf(at_zero, u);
    EXPECT_LE(g, 0.0);
    EXPECT_GT(g, prev);
    prev = g;
  }
  EXPECT_GT(prev, -1e-14);
}

TEST(SampleTgInvcdf, RejectsProbabilitiesOutsideOpenInterval) {
  const auto p = TruncatedGumbelParams::untruncated(0.0);
  EXPECT_THROW(sample_tg_invcdf(p, 0.0), ParameterError);
  EXPECT_THROW(sample_tg_invcdf(p, 1.0), ParameterError);
  EXPECT_THROW(sample_tg_invcdf(p, -0.2), ParameterError);
}

TEST(TgCdf, SpecialValues) {
  EXPECT_EQ(tg_cdf(1.5, TruncatedGumbelParams::truncated(0.3, 1.5)), 1.0);
  EXPECT_EQ(tg_cdf(9.0, TruncatedGumbelParams::truncated(0.3, 1.5)), 1.0);
  EXPECT_NEAR(tg_cdf(0.7, TruncatedGumbelParams::untruncated(0.7)), std::exp(-1.0), 1e-15);
}

TEST(TgCdf, MatchesHittingProbabilityDisplay) {
  // Phi_TG(log gamma + G; log P(B), inf) = exp(-(1/gamma) P(B) e^{-G}).
  const double gamma = 0.3;
  const double mass = 0.2;
  const double big_g = 0.8;
  const double lhs = tg_cdf(std::log(gamma) + big_g, TruncatedGumbelParams::untruncated(std::log(mass)));
  EXPECT_NEAR(lhs, std::exp(-(1.0 / gamma) * mass * std::exp(-big_g)), 1e-14);
}

TEST(TgCdf, AgreesWithUntruncatedRatioForm) {
  // F_TG(g) = F(g) / F(kappa) for the Gumbel CDF F.
  auto F = [](double g, double mu) { return std::exp(-std::exp(-(g - mu))); };
  for (double mu : {-2.0, 0.0, 2.0}) {
    for (double kappa : {-1.0, 0.0, 1.0}) {
      for (double g : {-3.0, -1.5, kappa - 0.1}) {
        EXPECT_NEAR(tg_cdf(g, TruncatedGumbelParams::truncated(mu, kappa)), F(g, mu) / F(kappa, mu),
                    1e-12);
      }
    }
  }
}

TEST(TgCdf, RoundTripsWithQuantile) {
  for (double mu : {-2.0, 0.0, 2.0}) {
    for (double kappa : {-1.0, 0.0, 1.0, kInf}) {
      const auto p = params_for(mu, kappa);
      for (double u : {0.01, 0.5, 0.99}) {
        const double back = tg_cdf(sample_tg_invcdf(p, u), p);
        EXPECT_NEAR(back, u, 1e-10 * u) << "mu=" << mu << " kappa=" << kappa;
      }
    }
  }
}

TEST(TgSamplers, AgreeInDistributionOnOneCell) {
  // The full grid is an acceptance criterion; one cell keeps the unit suite fast.
  Xoshiro256Stream a(21);
  Xoshiro256Stream b(22);
  const auto p = TruncatedGumbelParams::truncated(2.0, 0.0);
  const int n = 20000;
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = sample_tg_exp(p, a);
    y[i] = sample_tg_invcdf(p, b.uniform_open());
  }
  EXPECT_LT(stats::ks_two_sample(x, y), stats::ks_critical_two_sample(n, n));
}

TEST(TgChain, StrictlyDecreasing) {
  Xoshiro256Stream rng(23);
  for (int chain = 0; chain < 2000; ++chain) {
    double g = kInf;
    double mass = 1.0;
    for (int n = 0; n < 60; ++n) {
      const double next = sample_tg_exp(params_for(std::log(mass), g), rng);
      ASSERT_LT(next, g);
      g = next;
      mass *= 0.7;
    }
  }
}

TEST(Softplus, StableAtExtremes) {
  EXPECT_NEAR(softplus(0.0), std::log(2.0), 1e-15);
  EXPECT_EQ(softplus(800.0), 800.0);
  EXPECT_NEAR(softplus(-800.0), 0.0, 1e-300);
  EXPECT_GT(softplus(-50.0), 0.0);
}
