// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: astar_acceptance <path-to-astar_cli> <scratch-dir>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "astar/csv.hpp"
#include "astar/gumbel.hpp"
#include "astar/harness.hpp"
#include "astar/measures.hpp"
#include "astar/random_stream.hpp"
#include "astar/sampler.hpp"
#include "astar/statistics.hpp"
#include "astar/width_function.hpp"

namespace fs = std::filesystem;
using namespace astar;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const std::vector<std::string> kScalableFamilies{"worst-case", "triangle", "truncated-gaussian",
                                                 "staircase"};

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

StandardizedTarget family(const std::string& name, double r_max) {
  return build_family({name, {}, {}, {}, {}}, r_max);
}

std::string describe(const harness::ReportRow& row) {
  return row.quantity + " r_max=" + format_real(row.r_max) + " " + row.parameter_name + "=" +
         format_real(row.parameter) + " mean=" + format_real(row.mean) + " se=" + format_real(row.se) +
         " bound=" + format_real(row.bound);
}

void absorb(Outcome& out, const harness::BoundReport& report) {
  for (const auto& row : report.rows) {
    if (row.violation) out.fail(describe(row));
  }
  if (report.degenerate_runs > 0) {
    out.fail(report.experiment + ": " + std::to_string(report.degenerate_runs) + " degenerate runs");
  }
}

Outcome exactness() {
  Outcome out;
  const std::size_t n = 100000;
  const double crit = stats::ks_critical_one_sample(n, 1e-3);
  std::vector<StandardizedTarget> targets;
  for (const auto& name : kScalableFamilies) {
    for (double r : {1.0, 4.0, 64.0}) targets.push_back(family(name, r));
  }
  targets.push_back(uniform_ratio());
  targets.push_back(family("gaussian-pair", 1.0));
  double worst = 0.0;
  std::uint64_t index = 0;
  for (const auto& t : targets) {
    auto rng = Xoshiro256Stream(20240101).child(index++);
    const double ks = exactness_check(t, n, rng);
    worst = std::max(worst, ks);
    if (!(ks < crit)) out.fail(t.name() + " r_max=" + format_real(t.r_max()) + " ks=" + format_real(ks));
  }
  if (out.pass) {
    out.detail = std::to_string(targets.size()) + " targets, max KS " + format_real(worst) +
                 " < " + format_real(crit);
  }
  return out;
}

Outcome zn_bounds() {
  harness::ExperimentConfig cfg;
  cfg.family = {"worst-case", {}, {}, {}, {}};
  cfg.r_max_values = {8.0};
  cfg.replications = 100000;
  cfg.seed = 2;
  cfg.n_cap = 15;
  Outcome out;
  const auto report = harness::experiment_zn(cfg);
  absorb(out, report);
  if (out.pass) out.detail = "n=1..15 inside [(1/2)^(n-1) - 3SE, (3/4)^(n-1) + 3SE]";
  return out;
}

std::vector<double> ten_point_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back(0.05 + 0.1 * i);
  return grid;
}

Outcome hitting_or_residual(bool residual) {
  Outcome out;
  std::size_t rows = 0;
  std::size_t dropped = 0;
  for (const auto& name : kScalableFamilies) {
    harness::ExperimentConfig cfg;
    cfg.family = {name, {}, {}, {}, {}};
    cfg.r_max_values = {64.0};
    cfg.gamma_grid = ten_point_grid();
    cfg.replications = 100000;
    cfg.seed = 3;
    const auto report = residual ? harness::experiment_K(cfg) : harness::experiment_N(cfg);
    absorb(out, report);
    rows += report.rows.size();
    dropped += report.dropped_runs;
  }
  if (out.pass) {
    out.detail = std::to_string(rows) + " (family, gamma) rows, " + std::to_string(dropped) +
                 " runs past the continuation limit";
  }
  return out;
}

Outcome runtime_sweep() {
  harness::ExperimentConfig cfg;
  cfg.family = {"worst-case", {}, {}, {}, {}};
  cfg.r_max_values.clear();
  for (double r = 2.0; r <= 1024.0; r *= 2.0) cfg.r_max_values.push_back(r);
  cfg.replications = 10000;
  cfg.seed = 5;
  Outcome out;
  const auto report = harness::experiment_T(cfg);
  absorb(out, report);
  const auto& slope = report.rows.back();
  if (!(slope.mean <= 4.0 * harness::kAlpha)) {
    out.fail("slope " + format_real(slope.mean) + " > 4 alpha");
  }
  if (out.pass) {
    out.detail = "E[T] below 4a log r + 4a log 2 + 22 at r_max=2..1024; slope " +
                 format_real(slope.mean) + " <= " + format_real(4.0 * harness::kAlpha);
  }
  return out;
}

Outcome mean_neg_gumbel() {
  const std::vector<double> masses{1.0, 0.75, 0.5625, 0.421875};
  const double target = 1.0 + 4.0 / 3.0 + 16.0 / 9.0 + 64.0 / 27.0;
  Outcome out;
  const auto report = harness::experiment_mean_neg_gumbel(masses, 1000000, 6);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& row = report.rows[i];
    if (std::abs(row.bound - target) > 1e-12) out.fail("target mismatch " + format_real(row.bound));
    if (!(std::abs(row.mean - target) <= 3.0 * row.se)) out.fail(describe(row));
  }
  if (out.pass) {
    out.detail = "exp-race " + format_real(report.rows[0].mean) + ", inverse-cdf " +
                 format_real(report.rows[1].mean) + " vs " + format_real(target);
  }
  return out;
}

Outcome sampler_equivalence() {
  Outcome out;
  const int n = 100000;
  const double crit = stats::ks_critical_two_sample(n, n, 1e-3);
  double worst = 0.0;
  std::uint64_t cell = 0;
  for (double mu : {-2.0, 0.0, 2.0}) {
    for (double kappa : {-1.0, 0.0, 1.0, kInf}) {
      const auto p = std::isinf(kappa) ? TruncatedGumbelParams::untruncated(mu)
                                       : TruncatedGumbelParams::truncated(mu, kappa);
      auto a = Xoshiro256Stream(7).child(2 * cell);
      auto b = Xoshiro256Stream(7).child(2 * cell + 1);
      ++cell;
      std::vector<double> x(n);
      std::vector<double> y(n);
      for (int i = 0; i < n; ++i) {
        x[i] = sample_tg_exp(p, a);
        y[i] = sample_tg_invcdf(p, b.uniform_open());
      }
      const double d = stats::ks_two_sample(x, y);
      worst = std::max(worst, d);
      if (!(d < crit)) out.fail("mu=" + format_real(mu) + " kappa=" + format_real(kappa) + " D=" + format_real(d));
    }
  }
  if (out.pass) out.detail = "12 cells, max D " + format_real(worst) + " < " + format_real(crit);
  return out;
}

Outcome width_identities() {
  Outcome out;
  double worst_integral = 0.0;
  double worst_pointwise = 0.0;
  for (double r : {1.0, 2.0, 8.0, 64.0}) {
    std::vector<StandardizedTarget> targets;
    for (const auto& name : kScalableFamilies) targets.push_back(family(name, r));
    if (r == 1.0) targets.push_back(uniform_ratio());
    for (const auto& t : targets) {
      const double err = std::abs(width_integral(t) - 1.0 / t.r_max());
      worst_integral = std::max(worst_integral, err);
      if (!(err <= 1e-6)) out.fail(t.name() + " r_max=" + format_real(r) + " integral error " + format_real(err));
    }
    const auto numeric = WidthFunction::of(worst_case_family(r));
    const double k = 1.0 - std::sqrt(1.0 - 1.0 / r);
    for (int i = 1; i <= 1000; ++i) {
      const double g = i / 1000.0;
      const double closed = g <= k ? 1.0 : (k / g) * (k / g);
      const double err = std::abs(numeric(g) - closed);
      worst_pointwise = std::max(worst_pointwise, err);
      if (!(err <= 1e-6)) {
        out.fail("worst-case r_max=" + format_real(r) + " gamma=" + format_real(g));
        break;
      }
    }
  }
  const auto gp = family("gaussian-pair", 1.0);
  const double gp_err = std::abs(width_integral(gp) - 1.0 / gp.r_max());
  worst_integral = std::max(worst_integral, gp_err);
  if (!(gp_err <= 1e-6)) out.fail("gaussian-pair integral error " + format_real(gp_err));
  if (out.pass) {
    out.detail = "max |int w - 1/r_max| " + format_real(worst_integral) + ", max pointwise error " +
                 format_real(worst_pointwise);
  }
  return out;
}

Outcome worst_case_dominance() {
  Outcome out;
  std::vector<StandardizedTarget> targets;
  for (double r : {1.0, 2.0, 8.0, 64.0}) {
    for (const auto& name : kScalableFamilies) targets.push_back(family(name, r));
  }
  targets.push_back(uniform_ratio());
  targets.push_back(family("gaussian-pair", 1.0));
  double min_gap = kInf;
  for (const auto& t : targets) {
    const double extremal = inf_h(WidthFunction::worst_case(t.r_max())).value;
    const double own = inf_h(WidthFunction::of(t)).value;
    min_gap = std::min(min_gap, extremal - own);
    if (!(extremal >= own - 1e-9)) {
      out.fail(t.name() + " r_max=" + format_real(t.r_max()) + " inf_h " + format_real(own) +
               " > " + format_real(extremal));
    }
  }
  if (out.pass) {
    out.detail = std::to_string(targets.size()) + " widths, min gap " + format_real(min_gap);
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli, const fs::path& scratch) {
  Outcome out;
  const std::vector<std::pair<std::string, int>> runs{{"w1_a", 1}, {"w1_b", 1}, {"w3", 3}};
  for (const auto& [name, workers] : runs) {
    const fs::path dir = scratch / name;
    fs::remove_all(dir);
    const std::string cmd = "\"" + cli + "\" verify --seed 12345 --replications 20000 --r-max-values 8,64 --workers " +
                            std::to_string(workers) + " --dir \"" + dir.string() + "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    if (status != 0) out.fail("verify run " + name + " exited with status " + std::to_string(status));
  }
  if (!out.pass) return out;
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(scratch / "w1_a")) {
    if (entry.path().extension() != ".csv") continue;
    ++files;
    const auto reference = slurp(entry.path());
    for (const char* other : {"w1_b", "w3"}) {
      if (slurp(scratch / other / entry.path().filename()) != reference) {
        out.fail(entry.path().filename().string() + " differs in " + other);
      }
    }
  }
  if (files < 5) out.fail("expected 5 CSV files, found " + std::to_string(files));
  if (out.pass) out.detail = std::to_string(files) + " CSVs byte-identical across reruns and 1 vs 3 workers";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: astar_acceptance <astar_cli> <scratch-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path scratch = argv[2];
  fs::create_directories(scratch);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exactness: KS of 1e5 samples per family and r_max", exactness},
      {"E[Z_n] between (1/2)^(n-1) and (3/4)^(n-1)", zn_bounds},
      {"E[N(gamma)] <= alpha log(1/w) + 6", [] { return hitting_or_residual(false); }},
      {"E[K(gamma)] <= alpha (log 1/gamma + log 1/w) + 16", [] { return hitting_or_residual(true); }},
      {"E[T] sweep and slope <= 4 alpha", runtime_sweep},
      {"E[exp(-G_N)] = sum 1/P(B_n)", mean_neg_gumbel},
      {"truncated Gumbel samplers agree (two-sample KS)", sampler_equivalence},
      {"width integral = 1/r_max and closed-form worst-case width", width_identities},
      {"worst-case width dominates inf h", worst_case_dominance},
      {"verify output is deterministic", [&] { return determinism(cli, scratch); }},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
