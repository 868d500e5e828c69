#include "astar/measures.hpp"

#include <algorithm>
#include <array>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

#include "astar/errors.hpp"
#include "astar/numerics.hpp"
#include "astar/width_function.hpp"

namespace astar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTolerance = 1e-9;

void require_r_max(double r_max) {
  if (!(r_max >= 1.0) || !std::isfinite(r_max)) {
    throw ParameterError("r_max must be a finite number >= 1, got " + std::to_string(r_max));
  }
}

// Index range of the first run of maximal values.
std::pair<std::size_t, std::size_t> top_run(const std::vector<double>& values) {
  const double top = *std::max_element(values.begin(), values.end());
  std::size_t first = 0;
  while (values[first] != top) ++first;
  std::size_t last = first;
  while (last + 1 < values.size() && values[last + 1] == top) ++last;
  return {first, last};
}

bool rises_then_falls(const std::vector<double>& values) {
  std::size_t i = 1;
  while (i < values.size() && values[i] >= values[i - 1]) ++i;
  while (i < values.size() && values[i] <= values[i - 1]) ++i;
  return i == values.size();
}

void require_partition(const std::vector<double>& xs, const char* what) {
  if (xs.size() < 2 || xs.front() != 0.0 || xs.back() != 1.0) {
    throw ParameterError(std::string(what) + " must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw ParameterError(std::string(what) + " must be strictly increasing");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Target/proposal pairs

double ratio(const TargetProposalPair& pair, double x) {
  const double p = pair.p_density(x);
  const double q = pair.q_density(x);
  if (p > 0.0) return q / p;
  if (q > 0.0) {
    throw AbsoluteContinuityError("target has density " + std::to_string(q) +
                                  " where the proposal density vanishes (x = " +
                                  std::to_string(x) + ")");
  }
  return 0.0;
}

double renyi_inf(const TargetProposalPair& pair) {
  const double at_mode = ratio(pair, pair.ratio_mode);
  if (!std::isfinite(at_mode)) throw InfiniteDivergenceError("density ratio is unbounded at its mode");
  constexpr int kGrid = 20000;
  double grid_sup = 0.0;
  for (int i = 1; i < kGrid; ++i) {
    const double r = ratio(pair, pair.p_quantile(static_cast<double>(i) / kGrid));
    if (!std::isfinite(r)) throw InfiniteDivergenceError("density ratio is numerically unbounded");
    grid_sup = std::max(grid_sup, r);
  }
  if (grid_sup > at_mode * (1.0 + 1e-9)) {
    throw ParameterError("declared ratio mode is not a maximiser of q/p");
  }
  return std::log(at_mode);
}

// ---------------------------------------------------------------------------
// StandardizedTarget

StandardizedTarget::StandardizedTarget(std::string name, RealFn ratio, double mode, double r_max,
                                       RealFn q_cdf, std::vector<double> kinks,
                                       std::optional<StepProfile> steps)
    : name_(std::move(name)),
      ratio_(std::move(ratio)),
      mode_(mode),
      r_max_(r_max),
      log_r_max_(std::log(r_max)),
      q_cdf_(std::move(q_cdf)),
      kinks_(std::move(kinks)),
      steps_(std::move(steps)) {
  if (!(mode_ >= 0.0 && mode_ <= 1.0)) throw ParameterError("mode must lie in [0, 1]");
  if (!std::isfinite(r_max_)) throw InfiniteDivergenceError("r_max must be finite");
  require_r_max(r_max_);
}

StandardizedTarget StandardizedTarget::from_ratio(std::string name, RealFn ratio, RealFn q_cdf) {
  double mode = numerics::golden_section_argmax(ratio, 0.0, 1.0, 1e-10);
  for (double edge : {0.0, 1.0}) {
    if (ratio(edge) > ratio(mode)) mode = edge;
  }
  const double r_max = ratio(mode);
  return {std::move(name), std::move(ratio), mode, r_max, std::move(q_cdf)};
}

double StandardizedTarget::log_ratio(double x) const { return std::log(ratio_(x)); }

double StandardizedTarget::q_cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (q_cdf_) return q_cdf_(x);
  std::vector<double> cuts = kinks_;
  cuts.push_back(mode_);
  return numerics::integrate(ratio_, 0.0, x, 1e-10, cuts);
}

StandardizedTarget StandardizedTarget::with_mode(double mode) const {
  if (!(mode >= 0.0 && mode <= 1.0)) throw ParameterError("mode must lie in [0, 1]");
  if (ratio_(mode) < r_max_) {
    throw ParameterError("r(" + std::to_string(mode) + ") = " + std::to_string(ratio_(mode)) +
                         " is below r_max = " + std::to_string(r_max_) + "; not a maximiser");
  }
  StandardizedTarget copy = *this;
  copy.mode_ = mode;
  return copy;
}

StandardizedTarget standardize(const TargetProposalPair& pair) {
  constexpr int kGrid = 4096;
  double previous = -kInf;
  for (int i = 1; i < kGrid; ++i) {
    const double z = static_cast<double>(i) / kGrid;
    const double x = pair.p_quantile(z);
    if (!std::isfinite(x) || !(x > previous)) {
      throw StandardizationError("proposal quantile is not strictly increasing near z = " +
                                 std::to_string(z));
    }
    previous = x;
  }
  auto shared = std::make_shared<const TargetProposalPair>(pair);
  auto quantile = [shared](double z) {
    if (z <= 0.0) return -kInf;
    if (z >= 1.0) return kInf;
    return shared->p_quantile(z);
  };
  RealFn r = [shared, quantile](double z) { return ratio(*shared, quantile(z)); };
  RealFn cdf;
  if (pair.q_cdf) {
    cdf = [shared, quantile](double z) { return shared->q_cdf(quantile(z)); };
  }
  const double mode = pair.p_cdf(pair.ratio_mode);
  return {"standardized", std::move(r), mode, ratio(pair, pair.ratio_mode), std::move(cdf)};
}

double normalization(const StandardizedTarget& target) {
  // Cutting at the mode keeps narrow peaks from slipping between the first Simpson nodes.
  std::vector<double> cuts(target.kinks().begin(), target.kinks().end());
  cuts.push_back(target.mode());
  return numerics::integrate([&target](double x) { return target.ratio(x); }, 0.0, 1.0, 1e-8, cuts);
}

bool is_unimodal_on_grid(const StandardizedTarget& target, int points) {
  std::vector<double> r(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) r[i] = target.ratio(static_cast<double>(i) / (points - 1));
  std::vector<double> suffix(r.size());
  std::partial_sum(r.rbegin(), r.rend(), suffix.rbegin(),
                   [](double a, double b) { return std::max(a, b); });
  const double slack = 1e-12 * target.r_max();
  double prefix = r[0];
  for (std::size_t b = 1; b + 1 < r.size(); ++b) {
    if (r[b] + slack < std::min(prefix, suffix[b + 1])) return false;
    prefix = std::max(prefix, r[b]);
  }
  return true;
}

// ---------------------------------------------------------------------------
// Built-in families

StandardizedTarget uniform_ratio() {
  return {"uniform-ratio", [](double) { return 1.0; }, 0.5, 1.0, [](double x) { return x; }};
}

StandardizedTarget worst_case_family(double r_max) {
  require_r_max(r_max);
  const double g = gamma_tilde(r_max);
  const double knee = g * g;
  RealFn r = [r_max, g, knee](double x) { return x <= knee ? r_max : r_max * (g / std::sqrt(x)); };
  RealFn cdf = [r_max, g, knee](double x) {
    if (x <= knee) return r_max * x;
    return std::min(1.0, r_max * (knee + 2.0 * g * (std::sqrt(x) - g)));
  };
  std::vector<double> kinks;
  if (knee < 1.0) kinks.push_back(knee);
  return {"worst-case", std::move(r), 0.5 * knee, r_max, std::move(cdf), std::move(kinks)};
}

StandardizedTarget piecewise_linear(std::string name, std::vector<double> xs,
                                    std::vector<double> ys) {
  if (xs.size() != ys.size()) throw ParameterError("knot abscissae and ordinates differ in length");
  require_partition(xs, "knot abscissae");
  for (double y : ys) {
    if (!(y >= 0.0) || !std::isfinite(y)) throw ParameterError("knot ordinates must be finite and >= 0");
  }
  if (!rises_then_falls(ys)) throw ParameterError("piecewise-linear ratio is not unimodal");

  std::vector<double> cumulative(xs.size(), 0.0);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + 0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]);
  }
  if (std::abs(cumulative.back() - 1.0) > kMassTolerance) {
    std::ostringstream msg;
    msg << "piecewise-linear ratio integrates to " << cumulative.back() << ", not 1";
    throw ParameterError(msg.str());
  }
  const auto [first, last] = top_run(ys);
  const double mode = 0.5 * (xs[first] + xs[last]);
  const double r_max = ys[first];

  auto knots = std::make_shared<const std::array<std::vector<double>, 3>>(
      std::array<std::vector<double>, 3>{xs, ys, cumulative});
  auto segment = [knots](double x) {
    const auto& kx = (*knots)[0];
    auto it = std::upper_bound(kx.begin(), kx.end(), x);
    std::size_t i = it == kx.begin() ? 0 : static_cast<std::size_t>(it - kx.begin()) - 1;
    return std::min(i, kx.size() - 2);
  };
  auto value = [knots, segment](double x) {
    const auto& [kx, ky, kc] = *knots;
    const std::size_t i = segment(x);
    const double t = (x - kx[i]) / (kx[i + 1] - kx[i]);
    return ky[i] + t * (ky[i + 1] - ky[i]);
  };
  RealFn r = [value](double x) { return std::max(0.0, value(std::clamp(x, 0.0, 1.0))); };
  RealFn cdf = [knots, segment, value](double x) {
    const auto& [kx, ky, kc] = *knots;
    x = std::clamp(x, 0.0, 1.0);
    const std::size_t i = segment(x);
    return std::min(1.0, kc[i] + 0.5 * (x - kx[i]) * (ky[i] + value(x)));
  };
  std::vector<double> kinks(xs.begin() + 1, xs.end() - 1);
  return {std::move(name), std::move(r), mode, r_max, std::move(cdf), std::move(kinks)};
}

StandardizedTarget triangle_family(double r_max, double peak) {
  require_r_max(r_max);
  if (!(peak > 0.0 && peak < 1.0)) throw ParameterError("triangle peak must lie in (0, 1)");
  if (r_max <= 2.0) {
    const double foot = 2.0 - r_max;
    return piecewise_linear("triangle", {0.0, peak, 1.0}, {foot, r_max, foot});
  }
  const double half = 1.0 / r_max;
  const double p = std::clamp(peak, half, 1.0 - half);
  std::vector<double> xs{0.0};
  std::vector<double> ys{0.0};
  if (p - half > 0.0) {
    xs.push_back(p - half);
    ys.push_back(0.0);
  }
  xs.push_back(p);
  ys.push_back(r_max);
  if (p + half < 1.0) {
    xs.push_back(p + half);
    ys.push_back(0.0);
  }
  xs.push_back(1.0);
  ys.push_back(0.0);
  return piecewise_linear("triangle", std::move(xs), std::move(ys));
}

StandardizedTarget truncated_gaussian(double mean, double sd) {
  if (!(sd > 0.0) || !std::isfinite(sd)) throw ParameterError("sd must be positive");
  if (!(mean >= 0.0 && mean <= 1.0)) throw ParameterError("truncated Gaussian mean must lie in [0, 1]");
  // Mass on [0, 1] as an erf difference keeps precision when sd is large.
  const double mass =
      0.5 * (std::erf((1.0 - mean) / (sd * std::sqrt(2.0))) + std::erf(mean / (sd * std::sqrt(2.0))));
  const double norm = 1.0 / (sd * std::sqrt(2.0 * M_PI) * mass);
  RealFn r = [mean, sd, norm](double x) {
    const double z = (x - mean) / sd;
    return norm * std::exp(-0.5 * z * z);
  };
  RealFn cdf = [mean, sd, mass](double x) {
    x = std::clamp(x, 0.0, 1.0);
    const double v = 0.5 * (std::erf((x - mean) / (sd * std::sqrt(2.0))) +
                            std::erf(mean / (sd * std::sqrt(2.0))));
    return std::clamp(v / mass, 0.0, 1.0);
  };
  return {"truncated-gaussian", std::move(r), mean, norm, std::move(cdf)};
}

StandardizedTarget truncated_gaussian_family(double r_max, double mean) {
  require_r_max(r_max);
  if (r_max == 1.0) {
    return {"truncated-gaussian", [](double) { return 1.0; }, mean, 1.0,
            [](double x) { return std::clamp(x, 0.0, 1.0); }};
  }
  // Peak density decreases monotonically in sd; bisect on log sd.
  auto peak = [mean](double log_sd) { return truncated_gaussian(mean, std::exp(log_sd)).r_max(); };
  double lo = std::log(1e-8);
  double hi = std::log(1e8);
  if (peak(hi) > r_max) throw ParameterError("r_max too close to 1 for a truncated Gaussian");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (peak(mid) > r_max) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return truncated_gaussian(mean, std::exp(0.5 * (lo + hi)));
}

StandardizedTarget staircase(std::vector<double> breaks, std::vector<double> levels) {
  if (breaks.size() != levels.size() + 1) throw ParameterError("staircase needs one more breakpoint than levels");
  require_partition(breaks, "staircase breakpoints");
  for (double v : levels) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("staircase levels must be finite and >= 0");
  }
  if (!rises_then_falls(levels)) throw ParameterError("staircase levels are not unimodal");
  std::vector<double> cumulative(breaks.size(), 0.0);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    cumulative[i + 1] = cumulative[i] + levels[i] * (breaks[i + 1] - breaks[i]);
  }
  if (std::abs(cumulative.back() - 1.0) > kMassTolerance) {
    std::ostringstream msg;
    msg << "staircase integrates to " << cumulative.back() << ", not 1";
    throw ParameterError(msg.str());
  }
  const auto [first, last] = top_run(levels);
  const double mode = 0.5 * (breaks[first] + breaks[last + 1]);
  const double r_max = levels[first];

  auto profile = std::make_shared<const std::array<std::vector<double>, 3>>(
      std::array<std::vector<double>, 3>{breaks, levels, cumulative});
  auto index = [profile](double x) {
    const auto& b = (*profile)[0];
    auto it = std::upper_bound(b.begin(), b.end(), x);
    std::size_t i = it == b.begin() ? 0 : static_cast<std::size_t>(it - b.begin()) - 1;
    return std::min(i, b.size() - 2);
  };
  RealFn r = [profile, index](double x) { return (*profile)[1][index(x)]; };
  RealFn cdf = [profile, index](double x) {
    const auto& [b, lv, c] = *profile;
    x = std::clamp(x, 0.0, 1.0);
    const std::size_t i = index(x);
    return std::min(1.0, c[i] + lv[i] * (x - b[i]));
  };
  std::vector<double> kinks(breaks.begin() + 1, breaks.end() - 1);
  StepProfile steps{std::move(breaks), std::move(levels)};
  return {"staircase", std::move(r), mode, r_max, std::move(cdf), std::move(kinks), std::move(steps)};
}

StandardizedTarget staircase_family(double r_max) {
  require_r_max(r_max);
  const double shoulder = std::sqrt(r_max);
  const double top_width = 1.0 / (4.0 * r_max);
  const double shoulder_width = 1.0 / (4.0 * shoulder);
  const double base = 0.5 / (1.0 - top_width - shoulder_width);
  constexpr double kCenter = 0.35;
  const double t0 = kCenter - 0.5 * top_width;
  const double t1 = kCenter + 0.5 * top_width;
  return staircase({0.0, t0 - 0.5 * shoulder_width, t0, t1, t1 + 0.5 * shoulder_width, 1.0},
                   {base, shoulder, r_max, shoulder, base});
}

TargetProposalPair gaussian_pair(double mean_q, double sd_q, double mean_p, double sd_p) {
  if (!(sd_q > 0.0) || !(sd_p > 0.0)) throw ParameterError("standard deviations must be positive");
  if (!(sd_q < sd_p)) {
    throw InfiniteDivergenceError("target sd must be below proposal sd for a bounded density ratio");
  }
  const boost::math::normal_distribution<double> q(mean_q, sd_q);
  const boost::math::normal_distribution<double> p(mean_p, sd_p);
  auto pdf = [](const boost::math::normal_distribution<double>& d) {
    return [d](double x) { return std::isinf(x) ? 0.0 : boost::math::pdf(d, x); };
  };
  auto cdf = [](const boost::math::normal_distribution<double>& d) {
    return [d](double x) {
      if (std::isinf(x)) return x < 0 ? 0.0 : 1.0;
      return boost::math::cdf(d, x);
    };
  };
  TargetProposalPair pair;
  pair.q_density = pdf(q);
  pair.p_density = pdf(p);
  pair.q_cdf = cdf(q);
  pair.p_cdf = cdf(p);
  pair.p_quantile = [p](double z) {
    if (z <= 0.0) return -kInf;
    if (z >= 1.0) return kInf;
    return boost::math::quantile(p, z);
  };
  const double wq = 1.0 / (sd_q * sd_q);
  const double wp = 1.0 / (sd_p * sd_p);
  pair.ratio_mode = (mean_q * wq - mean_p * wp) / (wq - wp);
  pair.r_max = ratio(pair, pair.ratio_mode);
  return pair;
}

// ---------------------------------------------------------------------------
// Family registry

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"uniform-ratio", "worst-case", "triangle",
                                              "truncated-gaussian", "staircase", "gaussian-pair"};
  return names;
}

namespace {

double param_or(const FamilySpec& spec, const std::string& key, double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

StandardizedTarget build_base(const FamilySpec& spec, double r_max) {
  const std::string& name = spec.family;
  if (name == "uniform-ratio") return uniform_ratio();
  if (name == "worst-case") return worst_case_family(r_max);
  if (name == "triangle") return triangle_family(r_max, param_or(spec, "peak", 0.4));
  if (name == "truncated-gaussian") {
    const double mean = param_or(spec, "mean", 0.6);
    if (spec.params.count("sd")) return truncated_gaussian(mean, spec.params.at("sd"));
    return truncated_gaussian_family(r_max, mean);
  }
  if (name == "staircase") {
    if (!spec.breakpoints.empty() || !spec.levels.empty()) {
      return staircase(spec.breakpoints, spec.levels);
    }
    return staircase_family(r_max);
  }
  if (name == "gaussian-pair") {
    return standardize(gaussian_pair(param_or(spec, "target_mean", 0.5),
                                     param_or(spec, "target_sd", 0.8),
                                     param_or(spec, "proposal_mean", 0.0),
                                     param_or(spec, "proposal_sd", 1.0)));
  }
  std::string valid;
  for (const auto& n : family_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ParameterError("unknown family '" + name + "'; valid families: " + valid);
}

}  // namespace

StandardizedTarget build_family(const FamilySpec& spec, double r_max) {
  auto target = build_base(spec, r_max);
  if (spec.mode) return target.with_mode(*spec.mode);
  return target;
}

}  // namespace astar
