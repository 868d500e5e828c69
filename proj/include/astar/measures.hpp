#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace astar {

using RealFn = std::function<double(double)>;

/// Target Q and proposal P on the real line, described by densities and the
/// proposal CDF/quantile. P must dominate Q and r = q/p must be unimodal with
/// maximiser `ratio_mode`.
struct TargetProposalPair {
  RealFn q_density;
  RealFn p_density;
  RealFn p_cdf;
  RealFn p_quantile;
  double ratio_mode = 0.0;
  double r_max = 1.0;
  // Optional; when empty the standardized target integrates its ratio.
  RealFn q_cdf;
};

/// q(x) / p(x). Returns 0 where both densities vanish; throws
/// AbsoluteContinuityError where only p does.
double ratio(const TargetProposalPair& pair, double x);

/// log r_max, cross-checked against the supremum over a grid of proposal
/// quantiles. Throws InfiniteDivergenceError on a non-finite ratio.
double renyi_inf(const TargetProposalPair& pair);

/// Piecewise-constant ratio: `levels[i]` on [breaks[i], breaks[i+1]).
struct StepProfile {
  std::vector<double> breaks;
  std::vector<double> levels;
};

/// A target standardized against the uniform proposal on [0, 1]: its ratio
/// is the target density, unimodal with maximum r_max at `mode`.
class StandardizedTarget {
 public:
  StandardizedTarget(std::string name, RealFn ratio, double mode, double r_max, RealFn q_cdf,
                     std::vector<double> kinks = {}, std::optional<StepProfile> steps = {});

  /// Locates the mode by golden-section search and takes r_max = r(mode).
  static StandardizedTarget from_ratio(std::string name, RealFn ratio, RealFn q_cdf = {});

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] double ratio(double x) const { return ratio_(x); }
  [[nodiscard]] double log_ratio(double x) const;
  [[nodiscard]] double mode() const { return mode_; }
  [[nodiscard]] double r_max() const { return r_max_; }
  [[nodiscard]] double log_r_max() const { return log_r_max_; }
  /// Target CDF; integrates the ratio when no closed form was supplied.
  [[nodiscard]] double q_cdf(double x) const;
  [[nodiscard]] bool has_closed_form_cdf() const { return static_cast<bool>(q_cdf_); }
  /// Points in (0, 1) where the ratio jumps or kinks.
  [[nodiscard]] std::span<const double> kinks() const { return kinks_; }
  [[nodiscard]] const std::optional<StepProfile>& steps() const { return steps_; }

  /// Copy with a different maximiser; throws ParameterError if r(mode) is
  /// below r_max.
  [[nodiscard]] StandardizedTarget with_mode(double mode) const;

 private:
  std::string name_;
  RealFn ratio_;
  double mode_;
  double r_max_;
  double log_r_max_;
  RealFn q_cdf_;
  std::vector<double> kinks_;
  std::optional<StepProfile> steps_;
};

/// Pushes the pair through the proposal CDF so the proposal becomes uniform
/// on [0, 1]: r'(z) = r(p_quantile(z)), mode' = p_cdf(mode).
StandardizedTarget standardize(const TargetProposalPair& pair);

/// ∫₀¹ r by adaptive Simpson at absolute tolerance 1e-8.
double normalization(const StandardizedTarget& target);

/// True if no grid triple a < b < c has r(b) < min(r(a), r(c)).
bool is_unimodal_on_grid(const StandardizedTarget& target, int points = 2001);

// ---------------------------------------------------------------------------
// Built-in families

StandardizedTarget uniform_ratio();

/// r(x) = r_max * min{1, gamma_tilde * x^{-1/2}}: the density whose width
/// function is the extremal one at this r_max.
StandardizedTarget worst_case_family(double r_max);

/// Continuous piecewise-linear ratio through (xs[i], ys[i]); xs must start at
/// 0, end at 1 and the ordinates must rise then fall. Throws ParameterError
/// if the area differs from 1 by more than 1e-9.
StandardizedTarget piecewise_linear(std::string name, std::vector<double> xs,
                                    std::vector<double> ys);

/// Trapezoid (r_max <= 2) or triangle (r_max > 2) peaked near `peak`.
StandardizedTarget triangle_family(double r_max, double peak = 0.4);

/// N(mean, sd^2) restricted to [0, 1].
StandardizedTarget truncated_gaussian(double mean, double sd);

/// Truncated Gaussian whose peak density is r_max (uniform when r_max = 1).
StandardizedTarget truncated_gaussian_family(double r_max, double mean = 0.6);

/// Piecewise-constant unimodal ratio; the top plateau's midpoint is the mode.
/// Throws ParameterError unless the levels integrate to 1 within 1e-9.
StandardizedTarget staircase(std::vector<double> breaks, std::vector<double> levels);

/// Five-step staircase: base, shoulder sqrt(r_max), top r_max.
StandardizedTarget staircase_family(double r_max);

/// Gaussian target against a wider Gaussian proposal (sd_q < sd_p).
TargetProposalPair gaussian_pair(double mean_q, double sd_q, double mean_p, double sd_p);

/// User-facing family description from the config file or command line.
struct FamilySpec {
  std::string family;
  std::map<std::string, double> params;
  std::vector<double> breakpoints;
  std::vector<double> levels;
  std::optional<double> mode;

  bool operator==(const FamilySpec&) const = default;
};

const std::vector<std::string>& family_names();

/// Builds a family at the requested r_max (families with intrinsic r_max,
/// such as explicit staircases or gaussian-pair, ignore it).
StandardizedTarget build_family(const FamilySpec& spec, double r_max);

}  // namespace astar
