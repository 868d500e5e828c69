#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "astar/measures.hpp"
#include "astar/random_stream.hpp"

namespace astar {

/// Current search interval B_n = [left, right]; it always contains the mode.
struct BoundsState {
  double left = 0.0;
  double right = 1.0;
  std::size_t step = 1;  // index n of the next proposal

  [[nodiscard]] double mass() const { return right - left; }
};

/// Gumbel chain and the A* bounds derived from it.
struct ChainState {
  double gumbel = std::numeric_limits<double>::infinity();  // G_{n-1}; +inf before step 1
  double lower = -std::numeric_limits<double>::infinity();  // L_{n-1}
  double upper = std::numeric_limits<double>::infinity();   // U_{n-1}
  std::optional<double> incumbent;
  double incumbent_value = -std::numeric_limits<double>::infinity();

  [[nodiscard]] bool terminated() const { return upper <= lower; }
};

struct StepResult {
  BoundsState bounds;
  ChainState chain;
  double proposal;
  double mass;  // Z_n, the proposal mass X_n was drawn from
};

/// One step of global-bound A* sampling: propose X_n uniformly on B_n, draw
/// G_n ~ TG(log Z_n, G_{n-1}), raise L with log r(X_n) + G_n, set
/// U = log r_max + G_n, and move the endpoint on X_n's side of the mode to
/// X_n. Throws ParameterError if the chain has already terminated or the
/// interval is empty.
StepResult step(const StandardizedTarget& target, const BoundsState& bounds,
                const ChainState& chain, RandomStream& rng);

/// Full instrumentation of one run.
struct RunTrace {
  std::size_t steps = 0;  // T
  double sample = 0.0;
  // Z_1..Z_T, followed by masses of the continued bound process when the
  // run was asked to extend past termination.
  std::vector<double> masses;
  std::vector<double> gumbels;    // G_1..G_T
  std::vector<double> proposals;  // X_1..X_T, then continued proposals
  std::vector<double> gamma_grid;
  // N(gamma) restricted to steps 1..T; empty when S(gamma) was not hit.
  std::vector<std::optional<std::size_t>> hits;
  // N(gamma) over the continued proposal sequence; empty only if the
  // continuation limit was reached first.
  std::vector<std::optional<std::size_t>> hits_continued;
  // K(gamma) = max{0, T - N(gamma)}, 0 when not hit.
  std::vector<std::size_t> residuals;
  bool degenerate = false;  // Z_n underflowed to 0 before U <= L
};

struct RunOptions {
  std::size_t max_steps = 0;  // 0: ceil(40 (log r_max + 1)) + 1000
  // Keep drawing from the bound process after termination until at least
  // this many masses are recorded.
  std::size_t extend_masses_to = 0;
  // Keep drawing after termination until every gamma in the grid is hit.
  bool extend_hits = false;
  std::size_t extension_limit = 20000;
};

std::size_t default_max_steps(double r_max);

class RunawayRunError : public std::runtime_error {
 public:
  explicit RunawayRunError(RunTrace partial);
  [[nodiscard]] const RunTrace& partial_trace() const { return partial_; }

 private:
  RunTrace partial_;
};

/// Runs steps until U_n <= L_n and returns the incumbent
/// argmax_k (log r(X_k) + G_k) with its trace. `gamma_grid` must be sorted
/// ascending within (0, 1]. Throws RunawayRunError past max_steps.
RunTrace run(const StandardizedTarget& target, std::span<const double> gamma_grid,
             RandomStream& rng, const RunOptions& options = {});

/// KS distance between `n_samples` sampler outputs and the target CDF.
double exactness_check(const StandardizedTarget& target, std::size_t n_samples, RandomStream& rng);

/// KS distance of samples against the target CDF. Uses the closed-form CDF
/// when present and otherwise accumulates quadrature between sorted samples.
double ks_against_target(std::vector<double> samples, const StandardizedTarget& target);

}  // namespace astar
