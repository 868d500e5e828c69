#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "astar/measures.hpp"
#include "astar/random_stream.hpp"

namespace astar::harness {

/// 1 / ln(4/3): the geometric rate at which E[Z_n] shrinks, in nats.
inline const double kAlpha = 1.0 / std::log(4.0 / 3.0);

struct ExperimentConfig {
  FamilySpec family{"worst-case", {}, {}, {}, {}};
  std::vector<double> r_max_values{8.0};
  std::vector<double> gamma_grid{0.1, 0.25, 0.5, 0.75, 0.9};
  std::size_t replications = 10000;
  std::uint64_t seed = 0;
  std::size_t max_steps = 0;  // 0: sampler default
  std::size_t workers = 1;
  std::size_t n_cap = 15;     // horizon for Z_n and the Markov tail

  /// Throws ParameterError on R < 100, an unsorted grid, or gamma outside (0, 1].
  void validate() const;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One estimate against one theoretical bound. `violation` is set only when
/// the whole 3-sigma interval (Wilson interval for frequencies) clears the
/// bound, never on a raw comparison.
struct ReportRow {
  std::string quantity;
  double r_max = kNaN;
  std::string parameter_name;  // "n" or "gamma"
  double parameter = kNaN;
  double mean = kNaN;
  double se = kNaN;
  double bound = kNaN;        // upper bound
  double lower_bound = kNaN;  // only for two-sided quantities
  double slack = kNaN;        // bound - mean
  double ci_low = kNaN;
  double ci_high = kNaN;
  bool violation = false;
  bool vacuous = false;
  std::size_t count = 0;
  std::size_t censored = 0;
  double alt_mean = kNaN;            // alternative convention (frozen Z_n, hit-only N)
  double informational_bound = kNaN; // tighter or intermediate constant, not enforced
};

struct BoundReport {
  std::string experiment;
  std::vector<ReportRow> rows;
  std::size_t degenerate_runs = 0;
  std::size_t dropped_runs = 0;  // continuation limit hit before S(gamma)
  double wall_seconds = 0.0;     // metadata; never written to CSV

  [[nodiscard]] bool any_violation() const;
};

// Bound formulas ------------------------------------------------------------

double zn_upper_bound(std::size_t n);  // (3/4)^{n-1}
double zn_lower_bound(std::size_t n);  // (1/2)^{n-1}
double markov_tail_bound(double width, std::size_t n);
double n_bound(double width);                 // alpha log(1/w) + 6
double k_bound(double gamma, double width);   // alpha (log(1/gamma) + log(1/w)) + 16
double t_bound_proof(double r_max);           // 4 alpha log r_max + 4 alpha log 2 + 22
double t_bound_stated(double r_max);          // 2 alpha log r_max + 2 alpha log 2 + 22
double t_bound_for_width(double gamma, double width);  // 2 alpha (log 1/w + 2 log 1/gamma) + 22
double n0_constant(double width);             // ceil(log w / log(3/4)) + 1
double k0_constant(double gamma, double width);

/// Largest value of log(N_0 + 4) - (log(1/w) + 2) over `widths`; the
/// single-log inequality holds on the grid iff this is <= 0.
double single_log_inequality_margin(const std::vector<double>& widths);

// Replica simulation ----------------------------------------------------------

struct ReplicaSummary {
  std::size_t steps = 0;
  bool degenerate = false;
  double sample = 0.0;
  std::vector<double> masses;                // continued bound process, length n_cap
  std::vector<std::size_t> hits;             // continued N(gamma); 0 = not reached
  std::vector<std::uint8_t> hit_before_end;  // N(gamma) <= T
  std::vector<std::size_t> residuals;        // K(gamma)
};

struct SimulationPlan {
  std::vector<double> gamma_grid;
  std::size_t mass_horizon = 0;
  bool continue_hits = false;
  std::size_t max_steps = 0;
};

/// Runs R replicas; replica i draws from root.child(i) so results do not
/// depend on `workers`.
std::vector<ReplicaSummary> simulate(const StandardizedTarget& target, const SimulationPlan& plan,
                                     const Xoshiro256Stream& root, std::size_t replications,
                                     std::size_t workers);

/// Runs fn(i) for i in [0, count) on `workers` threads.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

// Experiments -------------------------------------------------------------------

BoundReport experiment_zn(const ExperimentConfig& cfg);
BoundReport experiment_markov_tail(const ExperimentConfig& cfg, double gamma);
BoundReport experiment_N(const ExperimentConfig& cfg);
BoundReport experiment_K(const ExperimentConfig& cfg);
BoundReport experiment_T(const ExperimentConfig& cfg);

/// Holds the masses fixed and simulates only the Gumbel chain
/// G_n ~ TG(log P_n, G_{n-1}) with both truncated-Gumbel samplers.
BoundReport experiment_mean_neg_gumbel(const std::vector<double>& masses, std::size_t replications,
                                       std::uint64_t seed, std::size_t workers = 1);

// Output --------------------------------------------------------------------------

void write_report_csv(std::ostream& out, const BoundReport& report);
std::string report_json(const std::vector<BoundReport>& reports, const ExperimentConfig& cfg);

}  // namespace astar::harness
