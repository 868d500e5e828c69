#pragma once

#include <optional>

#include "astar/random_stream.hpp"

namespace astar {

/// Unit-scale Gumbel with location `location`, conditioned to lie at or below
/// `truncation`. An empty truncation means +infinity (ordinary Gumbel).
class TruncatedGumbelParams {
 public:
  static TruncatedGumbelParams untruncated(double location);
  static TruncatedGumbelParams truncated(double location, double truncation);

  [[nodiscard]] double location() const { return location_; }
  [[nodiscard]] const std::optional<double>& truncation() const { return truncation_; }
  [[nodiscard]] bool is_truncated() const { return truncation_.has_value(); }

 private:
  TruncatedGumbelParams(double location, std::optional<double> truncation);

  double location_;
  std::optional<double> truncation_;
};

/// Rate and offset of the exponential race equivalent to a truncated Gumbel:
/// -log(T + offset) with T ~ Exp(rate) has law TG(log rate, -log offset).
struct ExpRaceState {
  double rate;
  double offset;

  static ExpRaceState from(const TruncatedGumbelParams& params);
};

/// Draws TG(mu, kappa) as -log(T + T0), T ~ Exp(e^mu), T0 = e^-kappa.
/// Evaluated as kappa - softplus(log E + kappa - mu) so that long chains with
/// very negative kappa do not underflow. The result never exceeds kappa.
double sample_tg_exp(const TruncatedGumbelParams& params, RandomStream& rng);

/// u-quantile of TG(mu, kappa); inverse-CDF sampler used to cross-check
/// sample_tg_exp. Throws ParameterError unless 0 < u < 1.
double sample_tg_invcdf(const TruncatedGumbelParams& params, double u);

/// CDF of TG(mu, kappa) at g.
double tg_cdf(double g, const TruncatedGumbelParams& params);

/// log(1 + e^x) without overflow.
double softplus(double x);

}  // namespace astar
