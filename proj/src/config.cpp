#include "bowendim/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

namespace bowendim {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("malformed config: key '" + key + "' needs a number, got '" + value + "'");
  }
  if (used != value.size())
    throw ConfigError("malformed config: key '" + key + "' needs a number, got '" + value + "'");
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("malformed config: key '" + key + "' needs an integer, got '" + value + "'");
  }
  if (used != value.size())
    throw ConfigError("malformed config: key '" + key + "' needs an integer, got '" + value + "'");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const std::size_t comma = value.find(',', pos);
    const std::string item = trim(value.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (!item.empty()) out.push_back(parse_double(key, item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (double v : parse_list(key, value)) out.push_back(static_cast<int>(v));
  return out;
}

} // namespace

void apply_config_entry(RunConfig& cfg, const std::string& section, const std::string& key,
                        const std::string& value) {
  auto unknown = [&]() -> ConfigError {
    return ConfigError("malformed config: unknown key '" + key + "' in section [" + section + "]");
  };
  if (section == "run") {
    if (key == "depth") cfg.depth = static_cast<int>(parse_int(key, value));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "sample_size") cfg.sample_size = static_cast<int>(parse_int(key, value));
    else if (key == "anchor_count") cfg.anchor_count = static_cast<int>(parse_int(key, value));
    else if (key == "tolerance") cfg.tolerance = parse_double(key, value);
    else if (key == "claim") cfg.claim = value;
    else if (key == "t") cfg.t = parse_double(key, value);
    else if (key == "epsilon") cfg.query_epsilon = parse_double(key, value);
    else if (key == "root_depth") cfg.root_depth = static_cast<int>(parse_int(key, value));
    else throw unknown();
  } else if (section == "system") {
    if (key == "kind") cfg.system = value;
    else if (key == "ratios") cfg.ratios = parse_list(key, value);
    else if (key == "offsets") cfg.offsets = parse_list(key, value);
    else if (key == "flips") cfg.flips = parse_int_list(key, value);
    else if (key == "m") cfg.m = static_cast<int>(parse_int(key, value));
    else if (key == "contraction") cfg.contraction = parse_double(key, value);
    else if (key == "tau") cfg.tau = parse_list(key, value);
    else if (key == "coupling") cfg.coupling = parse_double(key, value);
    else if (key == "alpha") cfg.alpha = parse_double(key, value);
    else if (key == "half_width") cfg.half_width = parse_double(key, value);
    else if (key == "s") cfg.s = parse_list(key, value);
    else throw unknown();
  } else if (section == "ladder") {
    if (key == "scales") cfg.scales = parse_list(key, value);
    else throw unknown();
  } else if (section == "omega") {
    if (key == "kind") cfg.omega_kind = value;
    else if (key == "value") cfg.omega_value = parse_double(key, value);
    else if (key == "table") cfg.omega_table = parse_list(key, value);
    else if (key == "samples") cfg.omega_samples = value;
    else if (key == "modulus") cfg.omega_modulus = parse_double(key, value);
    else if (key == "minorant_samples") cfg.minorant_samples = static_cast<int>(parse_int(key, value));
    else throw unknown();
  } else if (section == "budgets") {
    if (key == "max_words") cfg.budgets.max_words = static_cast<std::uint64_t>(parse_double(key, value));
    else if (key == "max_grid_cells") cfg.budgets.max_grid_cells = static_cast<std::uint64_t>(parse_double(key, value));
    else throw unknown();
  } else {
    throw ConfigError("malformed config: unknown section [" + section + "]");
  }
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw ConfigError("malformed config: cannot open '" + path + "'");
  RunConfig cfg;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("malformed config: unterminated section header at line " + std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("malformed config: expected key = value at line " + std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("malformed config: key '" + key + "' appears before any section header");
    apply_config_entry(cfg, section, key, value);
  }
  return cfg;
}

} // namespace bowendim
