#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "astar/measures.hpp"

namespace astar {

struct Interval {
  double lo;
  double hi;
  [[nodiscard]] double length() const { return hi - lo; }
  [[nodiscard]] bool contains(double x) const { return lo <= x && x <= hi; }
  [[nodiscard]] bool contains(const Interval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
};

/// S(gamma) = {x in [0,1] : r(x) >= gamma * r_max}, an interval around the
/// mode. Staircase targets use their breakpoints; everything else bisects on
/// each side of the mode to 1e-12 in x, returning points inside the set.
/// Throws ParameterError for gamma outside [0, 1].
Interval superlevel_interval(const StandardizedTarget& target, double gamma);

/// Length of superlevel_interval.
double width(const StandardizedTarget& target, double gamma);

/// Levels in (0, 1) where the width function jumps or kinks.
std::vector<double> width_breaks(const StandardizedTarget& target);

/// ∫₀¹ w(gamma) dgamma by adaptive Simpson; equals 1/r_max for any target.
double width_integral(const StandardizedTarget& target);

/// 1 - sqrt(1 - 1/r_max), the knee of the extremal width function.
/// Throws ParameterError for r_max < 1.
double gamma_tilde(double r_max);

/// v(gamma, knee): 1 up to the knee, (knee/gamma)^2 after it.
double width_template(double gamma, double knee);

/// ∫₀¹ v(gamma, knee) dgamma = 2 knee - knee^2.
double width_template_integral(double knee);

enum class WidthKind { numeric, closed_form_worst_case, closed_form_staircase };

class WidthFunction {
 public:
  /// Width profile of a target: breakpoint arithmetic for staircases,
  /// bisection otherwise.
  static WidthFunction of(const StandardizedTarget& target);
  /// The extremal profile v(., gamma_tilde(r_max)).
  static WidthFunction worst_case(double r_max);

  double operator()(double gamma) const { return evaluator_(gamma); }
  [[nodiscard]] double r_max() const { return r_max_; }
  [[nodiscard]] WidthKind kind() const { return kind_; }
  [[nodiscard]] std::span<const double> breaks() const { return breaks_; }
  [[nodiscard]] double integral() const;

 private:
  WidthFunction(std::function<double(double)> evaluator, double r_max, WidthKind kind,
                std::vector<double> breaks);

  std::function<double(double)> evaluator_;
  double r_max_;
  WidthKind kind_;
  std::vector<double> breaks_;
};

// f(gamma, w) = log(1/w(gamma)), g(gamma) = 2 log(1/gamma), h = f + g.
// All three return +inf when the argument of a log is zero.
double f_functional(double gamma, const WidthFunction& w);
double g_functional(double gamma);
double h_functional(double gamma, const WidthFunction& w);

struct HMinimum {
  double gamma;
  double value;
};

/// Minimises h(., w) on a log-spaced grid over [1e-6, 1] of `grid_size`
/// points, then refines by golden-section search between the neighbours of
/// the best grid point. Throws ParameterError for grid_size < 100.
HMinimum inf_h(const WidthFunction& w, int grid_size = 1000);

/// CSV rows "gamma,width,f,g,h" with 17 significant digits.
void write_width_csv(std::ostream& out, const WidthFunction& w, std::span<const double> gammas);

}  // namespace astar
