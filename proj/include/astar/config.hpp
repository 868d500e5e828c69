#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "astar/harness.hpp"
#include "astar/measures.hpp"

namespace astar {

/// Everything a CLI command can be configured with. The text form is a flat
/// key = value file split into [distribution], [experiment] and [output]
/// sections; '#' starts a comment and list values are comma separated.
///
///   [distribution]
///   family = worst-case
///   r_max = 8
///   peak = 0.4          # any other key becomes a family parameter
///
///   [experiment]
///   seed = 7
///   r_max_values = 2, 4, 8
///
///   [output]
///   dir = results
struct Config {
  // [distribution]
  FamilySpec distribution{"worst-case", {}, {}, {}, {}};
  double r_max = 8.0;

  // [experiment]
  std::optional<std::uint64_t> seed;
  std::size_t samples = 1000;
  std::size_t replications = 10000;
  std::vector<double> r_max_values{8.0};
  std::vector<double> gamma_grid{0.1, 0.25, 0.5, 0.75, 0.9};
  std::size_t max_steps = 0;
  std::size_t n_cap = 15;
  std::optional<std::size_t> workers;
  double tail_gamma = 0.5;
  std::vector<double> gumbel_masses{1.0, 0.75, 0.5625, 0.421875};
  std::size_t gumbel_replications = 100000;
  std::size_t width_points = 1000;

  // [output]
  std::string output_dir = ".";
  std::string input;  // sample file for `fit`
  bool trace = false;

  bool operator==(const Config&) const = default;

  /// Applies one key from `section`. Throws ConfigError carrying `line`.
  void set(const std::string& section, const std::string& key, const std::string& value,
           int line = 0);

  /// Experiment settings for the bounds harness; `workers` falls back to
  /// `default_workers` when the config leaves it unset.
  [[nodiscard]] harness::ExperimentConfig experiment(std::size_t default_workers) const;
};

Config parse_config(std::istream& in);
Config load_config(const std::string& path);
std::string serialize_config(const Config& cfg);

}  // namespace astar
