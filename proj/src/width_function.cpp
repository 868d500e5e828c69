#include "astar/width_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "astar/csv.hpp"
#include "astar/errors.hpp"
#include "astar/numerics.hpp"

namespace astar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_level(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ParameterError("superlevel gamma must lie in [0, 1], got " + std::to_string(gamma));
  }
}

Interval staircase_superlevel(const StepProfile& steps, double threshold) {
  const auto& lv = steps.levels;
  std::size_t first = 0;
  while (first < lv.size() && lv[first] < threshold) ++first;
  if (first == lv.size()) return {0.0, 0.0};
  std::size_t last = first;
  while (last + 1 < lv.size() && lv[last + 1] >= threshold) ++last;
  return {steps.breaks[first], steps.breaks[last + 1]};
}

}  // namespace

Interval superlevel_interval(const StandardizedTarget& target, double gamma) {
  require_level(gamma);
  const double threshold = gamma * target.r_max();
  if (target.steps()) return staircase_superlevel(*target.steps(), threshold);

  auto inside = [&target, threshold](double x) { return target.ratio(x) >= threshold; };
  const double mode = target.mode();
  if (!inside(mode)) return {mode, mode};
  const double lo = inside(0.0) ? 0.0 : numerics::bisect_boundary(inside, mode, 0.0, 1e-12);
  const double hi = inside(1.0) ? 1.0 : numerics::bisect_boundary(inside, mode, 1.0, 1e-12);
  return {lo, hi};
}

double width(const StandardizedTarget& target, double gamma) {
  return superlevel_interval(target, gamma).length();
}

std::vector<double> width_breaks(const StandardizedTarget& target) {
  std::vector<double> breaks;
  const double r_max = target.r_max();
  if (target.steps()) {
    for (double level : target.steps()->levels) breaks.push_back(level / r_max);
  } else {
    for (double x : target.kinks()) breaks.push_back(target.ratio(x) / r_max);
    breaks.push_back(target.ratio(0.0) / r_max);
    breaks.push_back(target.ratio(1.0) / r_max);
  }
  std::erase_if(breaks, [](double g) { return !(g > 0.0 && g < 1.0); });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

double width_integral(const StandardizedTarget& target) {
  return WidthFunction::of(target).integral();
}

double gamma_tilde(double r_max) {
  if (!(r_max >= 1.0)) throw ParameterError("r_max must be >= 1, got " + std::to_string(r_max));
  return 1.0 - std::sqrt(1.0 - 1.0 / r_max);
}

double width_template(double gamma, double knee) {
  if (gamma <= knee) return 1.0;
  const double t = knee / gamma;
  return t * t;
}

double width_template_integral(double knee) { return 2.0 * knee - knee * knee; }

WidthFunction::WidthFunction(std::function<double(double)> evaluator, double r_max,
                             WidthKind kind, std::vector<double> breaks)
    : evaluator_(std::move(evaluator)), r_max_(r_max), kind_(kind), breaks_(std::move(breaks)) {}

WidthFunction WidthFunction::of(const StandardizedTarget& target) {
  const WidthKind kind = target.steps() ? WidthKind::closed_form_staircase : WidthKind::numeric;
  return {[target](double gamma) { return width(target, gamma); }, target.r_max(), kind,
          width_breaks(target)};
}

WidthFunction WidthFunction::worst_case(double r_max) {
  const double knee = gamma_tilde(r_max);
  std::vector<double> breaks;
  if (knee < 1.0) breaks.push_back(knee);
  return {[knee](double gamma) {
            require_level(gamma);
            return width_template(gamma, knee);
          },
          r_max, WidthKind::closed_form_worst_case, std::move(breaks)};
}

double WidthFunction::integral() const {
  if (kind_ == WidthKind::closed_form_worst_case) return width_template_integral(breaks_.empty() ? 1.0 : breaks_[0]);
  if (kind_ == WidthKind::closed_form_staircase) {
    return numerics::integrate(evaluator_, 0.0, 1.0, 1e-8, breaks_);
  }
  // Smooth peaks give w(gamma) a logarithmic blow-up in slope as gamma -> 0.
  // Substituting gamma = exp(1 - 1/u) flattens it; S(0) itself is ignored
  // because a single level has no mass.
  auto integrand = [this](double u) {
    const double gamma = std::exp(1.0 - 1.0 / u);
    if (!(gamma > 0.0)) return 0.0;
    return evaluator_(gamma) * gamma / (u * u);
  };
  std::vector<double> cuts;
  for (double b : breaks_) cuts.push_back(1.0 / (1.0 - std::log(b)));
  return numerics::integrate(integrand, 0.0, 1.0, 1e-9, cuts);
}

double f_functional(double gamma, const WidthFunction& w) {
  const double width = w(gamma);
  return width > 0.0 ? -std::log(width) : kInf;
}

double g_functional(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw ParameterError("bound functional needs gamma in (0, 1], got " + std::to_string(gamma));
  }
  return -2.0 * std::log(gamma);
}

double h_functional(double gamma, const WidthFunction& w) {
  const double g = g_functional(gamma);
  return f_functional(gamma, w) + g;
}

HMinimum inf_h(const WidthFunction& w, int grid_size) {
  if (grid_size < 100) throw ParameterError("inf_h needs at least 100 grid points");
  constexpr double kLogLo = -6.0 * 2.302585092994045684;  // ln(1e-6)
  auto gamma_at = [&](int i) {
    if (i == grid_size - 1) return 1.0;
    return std::exp(kLogLo * (1.0 - static_cast<double>(i) / (grid_size - 1)));
  };
  int best = 0;
  double best_value = kInf;
  for (int i = 0; i < grid_size; ++i) {
    const double v = h_functional(gamma_at(i), w);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  HMinimum result{gamma_at(best), best_value};
  const double lo = std::log(gamma_at(std::max(best - 1, 0)));
  const double hi = std::log(gamma_at(std::min(best + 1, grid_size - 1)));
  auto h_log = [&w](double log_gamma) { return h_functional(std::min(1.0, std::exp(log_gamma)), w); };
  const double refined = numerics::golden_section_argmin(h_log, lo, hi, 1e-12);
  const double refined_value = h_log(refined);
  if (refined_value < result.value) result = {std::min(1.0, std::exp(refined)), refined_value};
  return result;
}

void write_width_csv(std::ostream& out, const WidthFunction& w, std::span<const double> gammas) {
  out << "gamma,width,f,g,h\n";
  for (double gamma : gammas) {
    out << format_real(gamma) << ',' << format_real(w(gamma)) << ','
        << format_real(f_functional(gamma, w)) << ',' << format_real(g_functional(gamma)) << ','
        << format_real(h_functional(gamma, w)) << '\n';
  }
}

}  // namespace astar
