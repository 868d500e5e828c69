#include "astar/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <json.hpp>
#include <ostream>
#include <thread>

#include "astar/csv.hpp"
#include "astar/errors.hpp"
#include "astar/gumbel.hpp"
#include "astar/sampler.hpp"
#include "astar/statistics.hpp"
#include "astar/width_function.hpp"

namespace astar::harness {

namespace {

// Stream tags; experiments sharing a tag see identical replicas.
constexpr std::uint64_t kTagMasses = 1;
constexpr std::uint64_t kTagHits = 3;
constexpr std::uint64_t kTagRuntime = 5;
constexpr std::uint64_t kTagGumbelExp = 6;
constexpr std::uint64_t kTagGumbelInv = 7;

constexpr double kInf = std::numeric_limits<double>::infinity();

Xoshiro256Stream experiment_root(std::uint64_t seed, std::uint64_t tag, std::size_t r_max_index) {
  return Xoshiro256Stream(seed).child(tag).child(r_max_index);
}

class Stopwatch {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Upper-bound row from a sample mean.
ReportRow mean_row(std::string quantity, double r_max, std::string parameter_name, double parameter,
                   const stats::Summary& s, double bound) {
  ReportRow row;
  row.quantity = std::move(quantity);
  row.r_max = r_max;
  row.parameter_name = std::move(parameter_name);
  row.parameter = parameter;
  row.mean = s.mean;
  row.se = s.se;
  row.count = s.count;
  row.bound = bound;
  row.slack = bound - s.mean;
  row.ci_low = s.mean - 3.0 * s.se;
  row.ci_high = s.mean + 3.0 * s.se;
  row.vacuous = std::isinf(bound);
  row.violation = !row.vacuous && row.ci_low > bound;
  return row;
}

double worst_case_cross_check(const ExperimentConfig& cfg, const StandardizedTarget& target,
                              double gamma) {
  const double numeric = width(target, gamma);
  if (cfg.family.family == "worst-case" && !cfg.family.mode) {
    const double closed = WidthFunction::worst_case(target.r_max())(gamma);
    if (std::abs(numeric - closed) > 1e-6) {
      throw NumericError("numeric width " + format_real(numeric) + " disagrees with closed form " +
                         format_real(closed) + " at gamma " + format_real(gamma));
    }
  }
  return numeric;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (replications < 100) throw ParameterError("experiments need at least 100 replications");
  if (r_max_values.empty()) throw ParameterError("experiments need at least one r_max value");
  for (double r : r_max_values) {
    if (!(r >= 1.0)) throw ParameterError("r_max values must be >= 1");
  }
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
    if (!(gamma_grid[i] > 0.0 && gamma_grid[i] <= 1.0)) {
      throw ParameterError("gamma grid values must lie in (0, 1]");
    }
    if (i > 0 && gamma_grid[i] < gamma_grid[i - 1]) {
      throw ParameterError("gamma grid must be sorted ascending");
    }
  }
  if (workers == 0) throw ParameterError("worker count must be positive");
  if (n_cap == 0) throw ParameterError("n_cap must be positive");
}

bool BoundReport::any_violation() const {
  return std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.violation; });
}

// ---------------------------------------------------------------------------
// Bound formulas

double zn_upper_bound(std::size_t n) { return std::pow(0.75, static_cast<double>(n) - 1.0); }
double zn_lower_bound(std::size_t n) { return std::pow(0.5, static_cast<double>(n) - 1.0); }

double markov_tail_bound(double width, std::size_t n) {
  return width > 0.0 ? zn_upper_bound(n) / width : kInf;
}

double n_bound(double width) { return width > 0.0 ? kAlpha * -std::log(width) + 6.0 : kInf; }

double k_bound(double gamma, double width) {
  return width > 0.0 ? kAlpha * (-std::log(gamma) - std::log(width)) + 16.0 : kInf;
}

double t_bound_proof(double r_max) {
  return 4.0 * kAlpha * std::log(r_max) + 4.0 * kAlpha * std::log(2.0) + 22.0;
}

double t_bound_stated(double r_max) {
  return 2.0 * kAlpha * std::log(r_max) + 2.0 * kAlpha * std::log(2.0) + 22.0;
}

double t_bound_for_width(double gamma, double width) {
  return width > 0.0 ? 2.0 * kAlpha * (-std::log(width) - 2.0 * std::log(gamma)) + 22.0 : kInf;
}

double n0_constant(double width) {
  return std::ceil(std::log(width) / std::log(0.75)) + 1.0;
}

double k0_constant(double gamma, double width) {
  return std::ceil((-std::log(gamma) - std::log(width) + 2.0) / std::log(4.0 / 3.0));
}

double single_log_inequality_margin(const std::vector<double>& widths) {
  double worst = -kInf;
  for (double w : widths) {
    worst = std::max(worst, std::log(n0_constant(w) + 4.0) - (-std::log(w) + 2.0));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Simulation

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<ReplicaSummary> simulate(const StandardizedTarget& target, const SimulationPlan& plan,
                                     const Xoshiro256Stream& root, std::size_t replications,
                                     std::size_t workers) {
  std::vector<ReplicaSummary> out(replications);
  RunOptions options;
  options.max_steps = plan.max_steps;
  options.extend_masses_to = plan.mass_horizon;
  options.extend_hits = plan.continue_hits;
  parallel_for(replications, workers, [&](std::size_t i) {
    auto rng = root.child(i);
    RunTrace trace = run(target, plan.gamma_grid, rng, options);
    ReplicaSummary& s = out[i];
    s.steps = trace.steps;
    s.degenerate = trace.degenerate;
    s.sample = trace.sample;
    if (plan.mass_horizon > 0) {
      s.masses.assign(trace.masses.begin(),
                      trace.masses.begin() + static_cast<std::ptrdiff_t>(plan.mass_horizon));
    }
    const std::size_t g = plan.gamma_grid.size();
    s.hits.resize(g, 0);
    s.hit_before_end.resize(g, 0);
    for (std::size_t k = 0; k < g; ++k) {
      if (trace.hits_continued[k]) s.hits[k] = *trace.hits_continued[k];
      s.hit_before_end[k] = trace.hits[k].has_value();
    }
    s.residuals = std::move(trace.residuals);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Experiments

BoundReport experiment_zn(const ExperimentConfig& cfg) {
  cfg.validate();
  Stopwatch clock;
  BoundReport report{"zn", {}, 0, 0, 0.0};
  for (std::size_t ri = 0; ri < cfg.r_max_values.size(); ++ri) {
    const double r_max = cfg.r_max_values[ri];
    const auto target = build_family(cfg.family, r_max);
    const auto reps = simulate(target, {{}, cfg.n_cap, false, cfg.max_steps},
                               experiment_root(cfg.seed, kTagMasses, ri), cfg.replications,
                               cfg.workers);
    std::vector<double> continued;
    std::vector<double> frozen;
    for (std::size_t n = 1; n <= cfg.n_cap; ++n) {
      continued.clear();
      frozen.clear();
      std::size_t finished = 0;
      for (const auto& rep : reps) {
        if (rep.degenerate) continue;
        continued.push_back(rep.masses[n - 1]);
        frozen.push_back(rep.masses[std::min(n, rep.steps) - 1]);
        if (rep.steps < n) ++finished;
      }
      auto row = mean_row("E[Z_n]", target.r_max(), "n", static_cast<double>(n),
                          stats::summarize(continued), zn_upper_bound(n));
      row.lower_bound = zn_lower_bound(n);
      row.violation = row.ci_low > row.bound || row.ci_high < row.lower_bound;
      row.censored = finished;
      row.alt_mean = stats::summarize(frozen).mean;
      report.rows.push_back(row);
    }
    for (const auto& rep : reps) report.degenerate_runs += rep.degenerate;
  }
  report.wall_seconds = clock.seconds();
  return report;
}

BoundReport experiment_markov_tail(const ExperimentConfig& cfg, double gamma) {
  cfg.validate();
  Stopwatch clock;
  BoundReport report{"markov_tail", {}, 0, 0, 0.0};
  for (std::size_t ri = 0; ri < cfg.r_max_values.size(); ++ri) {
    const double r_max = cfg.r_max_values[ri];
    const auto target = build_family(cfg.family, r_max);
    const double w = worst_case_cross_check(cfg, target, gamma);
    const auto reps = simulate(target, {{}, cfg.n_cap, false, cfg.max_steps},
                               experiment_root(cfg.seed, kTagMasses, ri), cfg.replications,
                               cfg.workers);
    for (std::size_t n = 1; n <= cfg.n_cap; ++n) {
      std::size_t trials = 0;
      std::size_t exceed = 0;
      for (const auto& rep : reps) {
        if (rep.degenerate) continue;
        ++trials;
        exceed += rep.masses[n - 1] >= w;
      }
      const auto ci = stats::wilson_interval(exceed, trials, 3.0);
      ReportRow row;
      row.quantity = "P(Z_n>=w)";
      row.r_max = target.r_max();
      row.parameter_name = "n";
      row.parameter = static_cast<double>(n);
      row.mean = ci.estimate;
      row.se = std::sqrt(ci.estimate * (1.0 - ci.estimate) / static_cast<double>(trials));
      row.bound = markov_tail_bound(w, n);
      row.slack = row.bound - row.mean;
      row.ci_low = ci.lower;
      row.ci_high = ci.upper;
      row.count = trials;
      row.vacuous = !(row.bound < 1.0);
      row.violation = !row.vacuous && ci.lower > row.bound;
      row.informational_bound = gamma;  // the gamma this tail was evaluated at
      report.rows.push_back(row);
    }
    for (const auto& rep : reps) report.degenerate_runs += rep.degenerate;
  }
  report.wall_seconds = clock.seconds();
  return report;
}

namespace {

// Shared by experiment_N and experiment_K so both read the same replicas.
struct HitSimulation {
  StandardizedTarget target;
  std::vector<double> widths;
  std::vector<ReplicaSummary> reps;
};

HitSimulation simulate_hits(const ExperimentConfig& cfg, std::size_t ri) {
  auto target = build_family(cfg.family, cfg.r_max_values[ri]);
  std::vector<double> widths;
  for (double gamma : cfg.gamma_grid) widths.push_back(worst_case_cross_check(cfg, target, gamma));
  auto reps = simulate(target, {cfg.gamma_grid, 0, true, cfg.max_steps},
                       experiment_root(cfg.seed, kTagHits, ri), cfg.replications, cfg.workers);
  return {std::move(target), std::move(widths), std::move(reps)};
}

}  // namespace

BoundReport experiment_N(const ExperimentConfig& cfg) {
  cfg.validate();
  Stopwatch clock;
  BoundReport report{"N", {}, 0, 0, 0.0};
  for (std::size_t ri = 0; ri < cfg.r_max_values.size(); ++ri) {
    const auto sim = simulate_hits(cfg, ri);
    for (std::size_t k = 0; k < cfg.gamma_grid.size(); ++k) {
      std::vector<double> all;
      std::vector<double> hit_only;
      std::size_t censored = 0;
      std::size_t dropped = 0;
      for (const auto& rep : sim.reps) {
        if (rep.degenerate) continue;
        if (rep.hits[k] == 0) {
          ++dropped;
          continue;
        }
        all.push_back(static_cast<double>(rep.hits[k]));
        if (rep.hit_before_end[k]) {
          hit_only.push_back(static_cast<double>(rep.hits[k]));
        } else {
          ++censored;
        }
      }
      const double w = sim.widths[k];
      auto row = mean_row("E[N(gamma)]", sim.target.r_max(), "gamma", cfg.gamma_grid[k],
                          stats::summarize(all), n_bound(w));
      row.censored = censored;
      row.alt_mean = hit_only.empty() ? kNaN : stats::summarize(hit_only).mean;
      row.informational_bound = w > 0.0 ? n0_constant(w) + 4.0 : kInf;
      report.rows.push_back(row);
      report.dropped_runs += dropped;
    }
    for (const auto& rep : sim.reps) report.degenerate_runs += rep.degenerate;
  }
  report.wall_seconds = clock.seconds();
  return report;
}

BoundReport experiment_K(const ExperimentConfig& cfg) {
  cfg.validate();
  Stopwatch clock;
  BoundReport report{"K", {}, 0, 0, 0.0};
  for (std::size_t ri = 0; ri < cfg.r_max_values.size(); ++ri) {
    const auto sim = simulate_hits(cfg, ri);
    for (std::size_t k = 0; k < cfg.gamma_grid.size(); ++k) {
      std::vector<double> residuals;
      std::size_t censored = 0;
      for (const auto& rep : sim.reps) {
        if (rep.degenerate) continue;
        residuals.push_back(static_cast<double>(rep.residuals[k]));
        censored += !rep.hit_before_end[k];
      }
      const double gamma = cfg.gamma_grid[k];
      const double w = sim.widths[k];
      auto row = mean_row("E[K(gamma)]", sim.target.r_max(), "gamma", gamma,
                          stats::summarize(residuals), k_bound(gamma, w));
      row.censored = censored;
      row.informational_bound = w > 0.0 ? k0_constant(gamma, w) + 4.0 : kInf;
      report.rows.push_back(row);
    }
    for (const auto& rep : sim.reps) report.degenerate_runs += rep.degenerate;
  }
  report.wall_seconds = clock.seconds();
  return report;
}

BoundReport experiment_T(const ExperimentConfig& cfg) {
  cfg.validate();
  Stopwatch clock;
  BoundReport report{"T", {}, 0, 0, 0.0};
  std::vector<double> log_r;
  std::vector<double> means;
  std::vector<double> ses;
  for (std::size_t ri = 0; ri < cfg.r_max_values.size(); ++ri) {
    const auto target = build_family(cfg.family, cfg.r_max_values[ri]);
    const auto reps = simulate(target, {{}, 0, false, cfg.max_steps},
                               experiment_root(cfg.seed, kTagRuntime, ri), cfg.replications,
                               cfg.workers);
    std::vector<double> steps;
    for (const auto& rep : reps) {
      if (rep.degenerate) {
        ++report.degenerate_runs;
        continue;
      }
      steps.push_back(static_cast<double>(rep.steps));
    }
    const auto s = stats::summarize(steps);
    auto row = mean_row("E[T]", target.r_max(), "r_max", target.r_max(), s, t_bound_proof(target.r_max()));
    row.informational_bound = t_bound_stated(target.r_max());
    report.rows.push_back(row);
    log_r.push_back(std::log(target.r_max()));
    means.push_back(s.mean);
    ses.push_back(s.se);
  }
  if (log_r.size() >= 2) {
    const auto fit = stats::least_squares(log_r, means, ses);
    ReportRow row;
    row.quantity = "slope E[T] vs ln r_max";
    row.parameter_name = "points";
    row.parameter = static_cast<double>(log_r.size());
    row.mean = fit.slope;
    row.se = fit.slope_se;
    row.bound = 4.0 * kAlpha;
    row.slack = row.bound - fit.slope;
    row.ci_low = fit.slope - 3.0 * fit.slope_se;
    row.ci_high = fit.slope + 3.0 * fit.slope_se;
    row.violation = row.ci_low > row.bound;
    row.count = log_r.size();
    row.alt_mean = fit.intercept;
    row.informational_bound = 2.0 * kAlpha;
    report.rows.push_back(row);
  }
  report.wall_seconds = clock.seconds();
  return report;
}

BoundReport experiment_mean_neg_gumbel(const std::vector<double>& masses, std::size_t replications,
                                       std::uint64_t seed, std::size_t workers) {
  if (masses.empty()) throw ParameterError("mass sequence must not be empty");
  for (double m : masses) {
    if (!(m > 0.0 && m <= 1.0)) throw ParameterError("masses must lie in (0, 1]");
  }
  if (replications < 2) throw ParameterError("need at least two replications");
  Stopwatch clock;
  BoundReport report{"mean_neg_gumbel", {}, 0, 0, 0.0};
  double target = 0.0;
  for (double m : masses) target += 1.0 / m;

  const Xoshiro256Stream exp_root = Xoshiro256Stream(seed).child(kTagGumbelExp);
  const Xoshiro256Stream inv_root = Xoshiro256Stream(seed).child(kTagGumbelInv);
  std::vector<double> last_exp(replications);
  std::vector<double> last_inv(replications);
  parallel_for(replications, workers, [&](std::size_t i) {
    auto rng_exp = exp_root.child(i);
    auto rng_inv = inv_root.child(i);
    double g_exp = kInf;
    double g_inv = kInf;
    for (double m : masses) {
      const double mu = std::log(m);
      auto params_exp = std::isinf(g_exp) ? TruncatedGumbelParams::untruncated(mu)
                                          : TruncatedGumbelParams::truncated(mu, g_exp);
      auto params_inv = std::isinf(g_inv) ? TruncatedGumbelParams::untruncated(mu)
                                          : TruncatedGumbelParams::truncated(mu, g_inv);
      g_exp = sample_tg_exp(params_exp, rng_exp);
      g_inv = sample_tg_invcdf(params_inv, rng_inv.uniform_open());
    }
    last_exp[i] = g_exp;
    last_inv[i] = g_inv;
  });

  auto add_row = [&](const char* name, const std::vector<double>& gumbels) {
    std::vector<double> e(gumbels.size());
    std::transform(gumbels.begin(), gumbels.end(), e.begin(), [](double g) { return std::exp(-g); });
    auto row = mean_row(name, kNaN, "N", static_cast<double>(masses.size()), stats::summarize(e), target);
    row.lower_bound = target;
    row.violation = row.ci_low > target || row.ci_high < target;
    report.rows.push_back(row);
  };
  add_row("E[exp(-G_N)] exp-race", last_exp);
  add_row("E[exp(-G_N)] inverse-cdf", last_inv);

  ReportRow ks;
  ks.quantity = "KS(G_N exp-race, inverse-cdf)";
  ks.parameter_name = "N";
  ks.parameter = static_cast<double>(masses.size());
  ks.mean = stats::ks_two_sample(last_exp, last_inv);
  ks.bound = stats::ks_critical_two_sample(replications, replications, 1e-3);
  ks.slack = ks.bound - ks.mean;
  ks.count = replications;
  ks.violation = ks.mean > ks.bound;
  report.rows.push_back(ks);
  report.wall_seconds = clock.seconds();
  return report;
}

// ---------------------------------------------------------------------------
// Output

void write_report_csv(std::ostream& out, const BoundReport& report) {
  out << "experiment,quantity,r_max,parameter_name,parameter,mean,se,bound,lower_bound,slack,"
         "ci_low,ci_high,violation,vacuous,count,censored,alt_mean,informational_bound\n";
  for (const auto& r : report.rows) {
    out << report.experiment << ',' << r.quantity << ',' << format_real(r.r_max) << ','
        << r.parameter_name << ',' << format_real(r.parameter) << ',' << format_real(r.mean) << ','
        << format_real(r.se) << ',' << format_real(r.bound) << ',' << format_real(r.lower_bound)
        << ',' << format_real(r.slack) << ',' << format_real(r.ci_low) << ','
        << format_real(r.ci_high) << ',' << (r.violation ? 1 : 0) << ',' << (r.vacuous ? 1 : 0)
        << ',' << r.count << ',' << r.censored << ',' << format_real(r.alt_mean) << ','
        << format_real(r.informational_bound) << '\n';
  }
}

std::string report_json(const std::vector<BoundReport>& reports, const ExperimentConfig& cfg) {
  using nlohmann::json;
  json j;
  j["config"] = {{"family", cfg.family.family},
                 {"family_params", cfg.family.params},
                 {"r_max_values", cfg.r_max_values},
                 {"gamma_grid", cfg.gamma_grid},
                 {"replications", cfg.replications},
                 {"seed", cfg.seed},
                 {"max_steps", cfg.max_steps},
                 {"n_cap", cfg.n_cap},
                 {"workers", cfg.workers}};
  j["alpha"] = kAlpha;
  bool any = false;
  json list = json::array();
  for (const auto& rep : reports) {
    json violations = json::array();
    for (const auto& r : rep.rows) {
      if (r.violation) {
        violations.push_back({{"quantity", r.quantity}, {"r_max", r.r_max}, {"parameter", r.parameter},
                              {"mean", r.mean}, {"se", r.se}, {"bound", r.bound}});
      }
    }
    any = any || rep.any_violation();
    list.push_back({{"experiment", rep.experiment},
                    {"rows", rep.rows.size()},
                    {"violation", rep.any_violation()},
                    {"violations", violations},
                    {"degenerate_runs", rep.degenerate_runs},
                    {"dropped_runs", rep.dropped_runs},
                    {"wall_seconds", rep.wall_seconds}});
  }
  j["experiments"] = list;
  j["any_violation"] = any;
  return j.dump(2);
}

}  // namespace astar::harness
