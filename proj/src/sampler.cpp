#include "astar/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "astar/errors.hpp"
#include "astar/gumbel.hpp"
#include "astar/numerics.hpp"
#include "astar/statistics.hpp"

namespace astar {

StepResult step(const StandardizedTarget& target, const BoundsState& bounds,
                const ChainState& chain, RandomStream& rng) {
  if (chain.terminated()) throw ParameterError("step called on a terminated chain");
  const double mass = bounds.mass();
  if (!(mass > 0.0)) throw ParameterError("step called on an empty interval");

  const double x = std::min(bounds.left + rng.uniform() * mass, bounds.right);
  const auto params = std::isinf(chain.gumbel)
                          ? TruncatedGumbelParams::untruncated(std::log(mass))
                          : TruncatedGumbelParams::truncated(std::log(mass), chain.gumbel);
  const double g = sample_tg_exp(params, rng);

  StepResult out{bounds, chain, x, mass};
  out.chain.gumbel = g;
  const double value = target.log_ratio(x) + g;
  if (!out.chain.incumbent || value > out.chain.lower) {
    out.chain.incumbent = x;
    out.chain.incumbent_value = value;
  }
  out.chain.lower = std::max(out.chain.lower, value);
  out.chain.upper = target.log_r_max() + g;

  if (x <= target.mode()) {
    out.bounds.left = x;
  } else {
    out.bounds.right = x;
  }
  ++out.bounds.step;
  return out;
}

std::size_t default_max_steps(double r_max) {
  return static_cast<std::size_t>(std::ceil(40.0 * (std::log(r_max) + 1.0))) + 1000;
}

RunawayRunError::RunawayRunError(RunTrace partial)
    : std::runtime_error("A* run exceeded " + std::to_string(partial.steps) +
                         " steps without terminating (non-unimodal ratio?)"),
      partial_(std::move(partial)) {}

namespace {

class HitRecorder {
 public:
  HitRecorder(const StandardizedTarget& target, std::span<const double> grid)
      : thresholds_(grid.size()), hits_(grid.size()) {
    for (std::size_t i = 0; i < grid.size(); ++i) thresholds_[i] = grid[i] * target.r_max();
  }

  // Grid is ascending, so the unhit entries always form a suffix.
  void observe(double r, std::size_t n) {
    while (first_unhit_ < hits_.size() && r >= thresholds_[first_unhit_]) {
      hits_[first_unhit_++] = n;
    }
  }

  [[nodiscard]] bool all_hit() const { return first_unhit_ == hits_.size(); }
  [[nodiscard]] const std::vector<std::optional<std::size_t>>& hits() const { return hits_; }

 private:
  std::vector<double> thresholds_;
  std::vector<std::optional<std::size_t>> hits_;
  std::size_t first_unhit_ = 0;
};

void validate_grid(std::span<const double> grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] <= 1.0)) throw ParameterError("gamma grid values must lie in (0, 1]");
    if (i > 0 && grid[i] < grid[i - 1]) throw ParameterError("gamma grid must be sorted ascending");
  }
}

}  // namespace

RunTrace run(const StandardizedTarget& target, std::span<const double> gamma_grid,
             RandomStream& rng, const RunOptions& options) {
  validate_grid(gamma_grid);
  const std::size_t max_steps =
      options.max_steps > 0 ? options.max_steps : default_max_steps(target.r_max());

  RunTrace trace;
  trace.gamma_grid.assign(gamma_grid.begin(), gamma_grid.end());
  HitRecorder recorder(target, gamma_grid);

  BoundsState bounds;
  ChainState chain;
  while (!chain.terminated()) {
    if (!(bounds.mass() > 0.0)) {
      trace.degenerate = true;
      break;
    }
    if (trace.steps == max_steps) {
      trace.hits = recorder.hits();
      trace.sample = chain.incumbent.value_or(bounds.left);
      throw RunawayRunError(std::move(trace));
    }
    auto next = step(target, bounds, chain, rng);
    ++trace.steps;
    trace.masses.push_back(next.mass);
    trace.gumbels.push_back(next.chain.gumbel);
    trace.proposals.push_back(next.proposal);
    recorder.observe(target.ratio(next.proposal), trace.steps);
    bounds = next.bounds;
    chain = next.chain;
  }
  trace.sample = chain.incumbent.value_or(bounds.left);
  trace.hits = recorder.hits();
  trace.residuals.resize(gamma_grid.size(), 0);
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
    if (trace.hits[i]) trace.residuals[i] = trace.steps - *trace.hits[i];
  }

  // The bound process does not depend on the Gumbels, so it can be carried
  // past termination to observe Z_n and N(gamma) for larger n.
  std::size_t extra = 0;
  auto want_more = [&] {
    return trace.masses.size() < options.extend_masses_to ||
           (options.extend_hits && !recorder.all_hit());
  };
  while (want_more() && extra < options.extension_limit && bounds.mass() > 0.0) {
    const double mass = bounds.mass();
    const double x = std::min(bounds.left + rng.uniform() * mass, bounds.right);
    trace.masses.push_back(mass);
    trace.proposals.push_back(x);
    recorder.observe(target.ratio(x), trace.masses.size());
    if (x <= target.mode()) {
      bounds.left = x;
    } else {
      bounds.right = x;
    }
    ++extra;
  }
  while (trace.masses.size() < options.extend_masses_to) trace.masses.push_back(0.0);
  trace.hits_continued = recorder.hits();
  return trace;
}

double ks_against_target(std::vector<double> samples, const StandardizedTarget& target) {
  if (samples.empty()) throw ParameterError("KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  std::vector<double> cdf(samples.size());
  if (target.has_closed_form_cdf()) {
    std::transform(samples.begin(), samples.end(), cdf.begin(),
                   [&target](double x) { return target.q_cdf(x); });
  } else {
    auto r = [&target](double x) { return target.ratio(x); };
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double x = std::clamp(samples[i], 0.0, 1.0);
      acc += numerics::integrate(r, prev, x, 1e-12, target.kinks());
      cdf[i] = acc;
      prev = x;
    }
  }
  return stats::ks_one_sample_sorted(samples, cdf);
}

double exactness_check(const StandardizedTarget& target, std::size_t n_samples, RandomStream& rng) {
  std::vector<double> samples;
  samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) samples.push_back(run(target, {}, rng).sample);
  return ks_against_target(std::move(samples), target);
}

}  // namespace astar
