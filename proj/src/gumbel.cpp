#include "astar/gumbel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "astar/errors.hpp"

namespace astar {

TruncatedGumbelParams::TruncatedGumbelParams(double location, std::optional<double> truncation)
    : location_(location), truncation_(truncation) {
  if (!std::isfinite(location_)) {
    throw ParameterError("truncated Gumbel location must be finite, got " +
                         std::to_string(location_));
  }
  if (truncation_ && (std::isnan(*truncation_) || *truncation_ == -std::numeric_limits<double>::infinity())) {
    throw ParameterError("truncated Gumbel truncation must lie in (-inf, +inf]");
  }
  if (truncation_ && std::isinf(*truncation_)) truncation_.reset();
}

TruncatedGumbelParams TruncatedGumbelParams::untruncated(double location) {
  return {location, std::nullopt};
}

TruncatedGumbelParams TruncatedGumbelParams::truncated(double location, double truncation) {
  return {location, truncation};
}

ExpRaceState ExpRaceState::from(const TruncatedGumbelParams& params) {
  return {std::exp(params.location()),
          params.is_truncated() ? std::exp(-*params.truncation()) : 0.0};
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double sample_tg_exp(const TruncatedGumbelParams& params, RandomStream& rng) {
  const double mu = params.location();
  // T = E / lambda with E ~ Exp(1).
  const double log_e = std::log(rng.exponential());
  if (!params.is_truncated()) return mu - log_e;
  const double kappa = *params.truncation();
  // -log(T + T0) = kappa - log1p(T e^kappa) = kappa - softplus(log T + kappa)
  return kappa - softplus(log_e - mu + kappa);
}

double sample_tg_invcdf(const TruncatedGumbelParams& params, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw ParameterError("quantile level must lie in (0, 1), got " + std::to_string(u));
  }
  const double mu = params.location();
  const double neg_log_u = -std::log(u);
  if (!params.is_truncated()) return mu - std::log(neg_log_u);
  const double kappa = *params.truncation();
  // mu - log(e^-(kappa - mu) - log u), the exponent combined as a log-sum-exp.
  const double a = mu - kappa;
  const double b = std::log(neg_log_u);
  const double hi = std::max(a, b);
  const double lse = hi + std::log1p(std::exp(std::min(a, b) - hi));
  // Rounding in mu - lse can land an ulp above kappa.
  return std::min(mu - lse, kappa);
}

double tg_cdf(double g, const TruncatedGumbelParams& params) {
  const double mu = params.location();
  if (!params.is_truncated()) return std::exp(-std::exp(mu - g));
  const double kappa = *params.truncation();
  if (g >= kappa) return 1.0;
  // -e^{mu-g} + e^{mu-kappa} = e^{mu-g} * expm1(g - kappa)
  return std::exp(std::exp(mu - g) * std::expm1(g - kappa));
}

}  // namespace astar
