#include "astar/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "astar/csv.hpp"
#include "astar/errors.hpp"

namespace astar {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_real(const std::string& key, const std::string& text, int line) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) {
    throw ConfigError("'" + key + "' expects a number, got '" + text + "'", line);
  }
  return value;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text, int line) {
  const std::string t = trim(text);
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || end != t.data() + t.size()) {
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + text + "'", line);
  }
  return value;
}

std::vector<double> parse_list(const std::string& key, const std::string& text, int line) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item, line));
  return out;
}

bool parse_bool(const std::string& key, const std::string& text, int line) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + text + "'", line);
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_real(values[i]);
  }
  return out;
}

}  // namespace

void Config::set(const std::string& section, const std::string& key, const std::string& value,
                 int line) {
  if (section == "distribution") {
    if (key == "family") {
      distribution.family = trim(value);
    } else if (key == "r_max") {
      r_max = parse_real(key, value, line);
    } else if (key == "mode") {
      distribution.mode = parse_real(key, value, line);
    } else if (key == "breakpoints") {
      distribution.breakpoints = parse_list(key, value, line);
    } else if (key == "levels") {
      distribution.levels = parse_list(key, value, line);
    } else {
      distribution.params[key] = parse_real(key, value, line);
    }
  } else if (section == "experiment") {
    if (key == "seed") {
      seed = parse_unsigned(key, value, line);
    } else if (key == "samples") {
      samples = parse_unsigned(key, value, line);
    } else if (key == "replications") {
      replications = parse_unsigned(key, value, line);
    } else if (key == "r_max_values") {
      r_max_values = parse_list(key, value, line);
    } else if (key == "gamma_grid") {
      gamma_grid = parse_list(key, value, line);
    } else if (key == "max_steps") {
      max_steps = parse_unsigned(key, value, line);
    } else if (key == "n_cap") {
      n_cap = parse_unsigned(key, value, line);
    } else if (key == "workers") {
      workers = parse_unsigned(key, value, line);
    } else if (key == "tail_gamma") {
      tail_gamma = parse_real(key, value, line);
    } else if (key == "gumbel_masses") {
      gumbel_masses = parse_list(key, value, line);
    } else if (key == "gumbel_replications") {
      gumbel_replications = parse_unsigned(key, value, line);
    } else if (key == "width_points") {
      width_points = parse_unsigned(key, value, line);
    } else {
      throw ConfigError("unknown key '" + key + "' in [experiment]", line);
    }
  } else if (section == "output") {
    if (key == "dir") {
      output_dir = trim(value);
    } else if (key == "input") {
      input = trim(value);
    } else if (key == "trace") {
      trace = parse_bool(key, value, line);
    } else {
      throw ConfigError("unknown key '" + key + "' in [output]", line);
    }
  } else {
    throw ConfigError("unknown section [" + section + "]", line);
  }
}

harness::ExperimentConfig Config::experiment(std::size_t default_workers) const {
  harness::ExperimentConfig out;
  out.family = distribution;
  out.r_max_values = r_max_values;
  out.gamma_grid = gamma_grid;
  out.replications = replications;
  out.seed = seed.value_or(0);
  out.max_steps = max_steps;
  out.workers = workers.value_or(default_workers);
  out.n_cap = n_cap;
  return out;
}

Config parse_config(std::istream& in) {
  Config cfg;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("unterminated section header", line);
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      if (section != "distribution" && section != "experiment" && section != "output") {
        throw ConfigError("unknown section [" + section + "]", line);
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(std::string_view(text).substr(0, eq));
    if (key.empty()) throw ConfigError("empty key", line);
    if (section.empty()) throw ConfigError("key '" + key + "' appears before any section", line);
    cfg.set(section, key, text.substr(eq + 1), line);
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string serialize_config(const Config& cfg) {
  std::ostringstream out;
  out << "[distribution]\n";
  out << "family = " << cfg.distribution.family << '\n';
  out << "r_max = " << format_real(cfg.r_max) << '\n';
  if (cfg.distribution.mode) out << "mode = " << format_real(*cfg.distribution.mode) << '\n';
  if (!cfg.distribution.breakpoints.empty()) {
    out << "breakpoints = " << join(cfg.distribution.breakpoints) << '\n';
  }
  if (!cfg.distribution.levels.empty()) out << "levels = " << join(cfg.distribution.levels) << '\n';
  for (const auto& [key, value] : cfg.distribution.params) {
    out << key << " = " << format_real(value) << '\n';
  }

  out << "\n[experiment]\n";
  if (cfg.seed) out << "seed = " << *cfg.seed << '\n';
  out << "samples = " << cfg.samples << '\n';
  out << "replications = " << cfg.replications << '\n';
  out << "r_max_values = " << join(cfg.r_max_values) << '\n';
  out << "gamma_grid = " << join(cfg.gamma_grid) << '\n';
  out << "max_steps = " << cfg.max_steps << '\n';
  out << "n_cap = " << cfg.n_cap << '\n';
  if (cfg.workers) out << "workers = " << *cfg.workers << '\n';
  out << "tail_gamma = " << format_real(cfg.tail_gamma) << '\n';
  out << "gumbel_masses = " << join(cfg.gumbel_masses) << '\n';
  out << "gumbel_replications = " << cfg.gumbel_replications << '\n';
  out << "width_points = " << cfg.width_points << '\n';

  out << "\n[output]\n";
  out << "dir = " << cfg.output_dir << '\n';
  if (!cfg.input.empty()) out << "input = " << cfg.input << '\n';
  out << "trace = " << (cfg.trace ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace astar
