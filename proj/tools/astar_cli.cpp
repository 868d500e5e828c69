// astar_cli: sample, fit, widths, verify and sweep for global-bound A* sampling.
//
// Exit codes: 0 ok, 1 bound violation or failed check, 2 configuration error,
// 3 runtime error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "astar/config.hpp"
#include "astar/csv.hpp"
#include "astar/errors.hpp"
#include "astar/harness.hpp"
#include "astar/sampler.hpp"
#include "astar/statistics.hpp"
#include "astar/width_function.hpp"

namespace {

using namespace astar;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Command-line overrides, kept as text so they go through the same parser
// as config-file values.
struct Override {
  std::string section;
  std::string key;
  std::optional<std::string> value;
};

std::size_t default_workers() {
  if (const char* env = std::getenv("ASTAR_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("ASTAR_WORKERS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

std::uint64_t seed_or_entropy(const Config& cfg) {
  if (cfg.seed) return *cfg.seed;
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  std::cerr << "seed " << seed << '\n';
  return seed;
}

void require_seed(const Config& cfg, const char* command) {
  if (!cfg.seed) throw ConfigError(std::string(command) + " requires --seed (or seed in [experiment])");
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

int cmd_sample(const Config& cfg, const std::string& output) {
  const auto target = build_family(cfg.distribution, cfg.r_max);
  Xoshiro256Stream rng(seed_or_entropy(cfg));
  std::ofstream file;
  if (!output.empty()) file = open_output(output);
  std::ostream& out = output.empty() ? std::cout : file;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const auto trace = run(target, {}, rng, {cfg.max_steps});
    out << format_real(trace.sample);
    if (cfg.trace) out << ' ' << trace.steps;
    out << '\n';
  }
  return kExitOk;
}

std::vector<double> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sample file '" + path + "'");
  std::vector<double> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    try {
      std::size_t used = 0;
      samples.push_back(std::stod(first, &used));
      if (used != first.size()) throw std::invalid_argument(first);
    } catch (const std::exception&) {
      throw ConfigError("'" + first + "' is not a number in " + path, line_no);
    }
  }
  if (samples.empty()) throw ConfigError("sample file '" + path + "' is empty");
  return samples;
}

int cmd_fit(const Config& cfg) {
  const auto target = build_family(cfg.distribution, cfg.r_max);
  double ks = 0.0;
  std::size_t n = 0;
  if (!cfg.input.empty()) {
    auto samples = read_samples(cfg.input);
    n = samples.size();
    ks = ks_against_target(std::move(samples), target);
  } else {
    Xoshiro256Stream rng(seed_or_entropy(cfg));
    n = cfg.samples;
    ks = exactness_check(target, n, rng);
  }
  const double threshold = stats::ks_critical_one_sample(n, 1e-3);
  const bool pass = ks < threshold;
  std::cout << "family " << target.name() << " r_max " << format_real(target.r_max()) << " n " << n
            << " ks " << format_real(ks) << " threshold " << format_real(threshold) << ' '
            << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitViolation;
}

int cmd_widths(const Config& cfg, const std::string& output) {
  if (cfg.width_points < 2) throw ConfigError("width_points must be at least 2");
  const auto target = build_family(cfg.distribution, cfg.r_max);
  const auto w = WidthFunction::of(target);
  std::vector<double> gammas(cfg.width_points);
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    gammas[i] = static_cast<double>(i + 1) / static_cast<double>(gammas.size());
  }
  std::ofstream file;
  if (!output.empty()) file = open_output(output);
  write_width_csv(output.empty() ? std::cout : file, w, gammas);

  const double integral = w.integral();
  const double expected = 1.0 / target.r_max();
  const double diff = std::abs(integral - expected);
  const bool pass = diff <= 1e-6;
  std::cerr << "integral " << format_real(integral) << " 1/r_max " << format_real(expected)
            << " diff " << format_real(diff) << ' ' << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitViolation;
}

void write_csv(const std::filesystem::path& dir, const harness::BoundReport& report) {
  auto out = open_output(dir / (report.experiment + ".csv"));
  harness::write_report_csv(out, report);
}

void print_summary(const harness::BoundReport& report) {
  std::size_t violations = 0;
  for (const auto& row : report.rows) violations += row.violation;
  std::cerr << report.experiment << ": " << report.rows.size() << " rows, " << violations
            << " violations, " << report.degenerate_runs << " degenerate runs\n";
}

int cmd_verify(const Config& cfg) {
  require_seed(cfg, "verify");
  const auto exp = cfg.experiment(default_workers());
  std::vector<harness::BoundReport> reports;
  reports.push_back(harness::experiment_zn(exp));
  reports.push_back(harness::experiment_markov_tail(exp, cfg.tail_gamma));
  reports.push_back(harness::experiment_N(exp));
  reports.push_back(harness::experiment_K(exp));
  reports.push_back(harness::experiment_mean_neg_gumbel(cfg.gumbel_masses, cfg.gumbel_replications,
                                                        exp.seed, exp.workers));
  const std::filesystem::path dir = cfg.output_dir;
  bool violation = false;
  for (const auto& report : reports) {
    write_csv(dir, report);
    print_summary(report);
    violation = violation || report.any_violation();
  }
  auto json = open_output(dir / "summary.json");
  json << harness::report_json(reports, exp) << '\n';
  return violation ? kExitViolation : kExitOk;
}

int cmd_sweep(const Config& cfg) {
  require_seed(cfg, "sweep");
  const auto exp = cfg.experiment(default_workers());
  const auto report = harness::experiment_T(exp);
  const std::filesystem::path dir = cfg.output_dir;
  write_csv(dir, report);
  auto json = open_output(dir / "summary_T.json");
  json << harness::report_json({report}, exp) << '\n';
  for (const auto& row : report.rows) {
    if (row.parameter_name == "points") {
      std::cout << "slope " << format_real(row.mean) << " se " << format_real(row.se) << " bound "
                << format_real(row.bound) << '\n';
    }
  }
  print_summary(report);
  return report.any_violation() ? kExitViolation : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact global-bound A* sampling for 1-D targets with a unimodal density ratio"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("-c,--config", config_path, "Config file")->check(CLI::ExistingFile);

  std::vector<Override> overrides = {
      {"distribution", "family", {}},   {"distribution", "r_max", {}},
      {"distribution", "mode", {}},     {"experiment", "seed", {}},
      {"experiment", "samples", {}},    {"experiment", "replications", {}},
      {"experiment", "r_max_values", {}}, {"experiment", "gamma_grid", {}},
      {"experiment", "workers", {}},    {"experiment", "max_steps", {}},
      {"experiment", "tail_gamma", {}}, {"experiment", "width_points", {}},
      {"experiment", "gumbel_replications", {}}, {"output", "dir", {}},
      {"output", "input", {}},
  };
  for (auto& o : overrides) {
    std::string flag = "--" + o.key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    app.add_option(flag, o.value, "Overrides " + o.section + "." + o.key);
  }
  std::vector<std::string> params;
  app.add_option("-p,--param", params, "Family parameter as key=value (repeatable)");
  bool trace = false;
  std::string output;

  auto* sample = app.add_subcommand("sample", "Draw samples, one per line");
  sample->add_flag("--trace", trace, "Append the step count T to each sample");
  sample->add_option("-o,--output", output, "Output file (default stdout)");
  auto* fit = app.add_subcommand("fit", "KS test of samples against the target CDF");
  auto* widths = app.add_subcommand("widths", "Width profile CSV with the integral check");
  widths->add_option("-o,--output", output, "Output file (default stdout)");
  auto* verify = app.add_subcommand("verify", "Run the bound experiments and write CSV reports");
  auto* sweep = app.add_subcommand("sweep", "Expected runtime against r_max");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    Config cfg = config_path.empty() ? Config{} : load_config(config_path);
    for (const auto& o : overrides) {
      if (o.value) cfg.set(o.section, o.key, *o.value);
    }
    for (const auto& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos) throw ConfigError("--param expects key=value, got '" + p + "'");
      cfg.set("distribution", p.substr(0, eq), p.substr(eq + 1));
    }
    if (trace) cfg.trace = true;

    if (*sample) return cmd_sample(cfg, output);
    if (*fit) return cmd_fit(cfg);
    if (*widths) return cmd_widths(cfg, output);
    if (*verify) return cmd_verify(cfg);
    if (*sweep) return cmd_sweep(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParameterError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
