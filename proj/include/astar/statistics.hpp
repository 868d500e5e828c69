#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace astar::stats {

struct Summary {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean from the sample variance
  std::size_t count = 0;
};

/// Two-pass mean and standard error, summed in index order.
Summary summarize(std::span<const double> values);

struct ProportionInterval {
  double estimate;
  double lower;
  double upper;
};

/// Wilson score interval for successes/trials at `z` standard deviations.
ProportionInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 3.0);

/// sup |F_n - F| for a sample against a continuous CDF.
double ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

/// sup |F_n - cdf| given the sample sorted ascending and the CDF evaluated at
/// each sorted point.
double ks_one_sample_sorted(std::span<const double> sorted, std::span<const double> cdf_values);

/// sup |F_a - F_b| between two empirical distributions.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic one-sample critical value sqrt(ln(2/alpha) / (2n)).
double ks_critical_one_sample(std::size_t n, double alpha = 1e-3);

/// Asymptotic two-sample critical value sqrt(-ln(alpha/2)/2) sqrt((n+m)/(nm)).
double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha = 1e-3);

struct LinearFit {
  double slope;
  double intercept;
  double slope_se;  // propagated from per-point standard errors
};

/// Ordinary least squares of y on x; `y_se` (optional, may be empty) feeds
/// the slope's standard error.
LinearFit least_squares(std::span<const double> x, std::span<const double> y,
                        std::span<const double> y_se = {});

}  // namespace astar::stats
