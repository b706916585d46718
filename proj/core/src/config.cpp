#include "ifa/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ifa {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected boolean, got '" + v + "'");
}

}  // namespace

void RunConfig::validate() const {
  if (metrics.empty()) throw std::invalid_argument("config: empty metric set");
  if (jobs < 1) throw std::invalid_argument("config: parallelism must be >= 1");
  if (histogram_bins < 2) throw std::invalid_argument("config: histogram_bins must be >= 2");
}

std::set<Metric> parse_metric_set(const std::string& spec) {
  if (spec == "tier1") return tier1_metrics();
  if (spec == "tier2") return tier2_metrics();
  if (spec == "all") {
    auto s = tier1_metrics();
    s.merge(tier2_metrics());
    return s;
  }
  std::set<Metric> out;
  std::istringstream in(spec);
  std::string name;
  while (std::getline(in, name, ',')) {
    name = trim(name);
    if (name.empty()) continue;
    const auto m = metric_from_name(name);
    if (!m) throw std::invalid_argument("unknown metric: " + name);
    out.insert(*m);
  }
  if (out.empty()) throw std::invalid_argument("empty metric list: " + spec);
  return out;
}

void apply_config_line(RunConfig& cfg, const std::string& key,
                       const std::string& value) {
  if (key == "metrics") {
    cfg.metrics = parse_metric_set(value);
  } else if (key == "jobs") {
    cfg.jobs = std::stoi(value);
  } else if (key == "cache_dir") {
    cfg.cache_dir = value;
  } else if (key == "out_dir") {
    cfg.out_dir = value;
  } else if (key == "no_cache") {
    cfg.use_cache = !parse_bool(value);
  } else if (key == "or_threshold") {
    cfg.or_threshold = value == "ci" ? -1.0 : std::stod(value);
  } else if (key == "histogram_bins") {
    cfg.histogram_bins = std::stoi(value);
  } else if (key == "l0_count_samples") {
    cfg.l0_count_samples = parse_bool(value);
  } else if (key.rfind("const.", 0) == 0) {
    cfg.constants.set(key.substr(6), std::stod(value));
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    }
    try {
      apply_config_line(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "metrics = ";
  bool first = true;
  for (Metric m : cfg.metrics) {
    if (!first) out << ",";
    out << metric_info(m).name;
    first = false;
  }
  out << "\n";
  out << "jobs = " << cfg.jobs << "\n";
  out << "no_cache = " << (cfg.use_cache ? "false" : "true") << "\n";
  out << "cache_dir = " << effective_cache_dir(cfg) << "\n";
  out << "out_dir = " << cfg.out_dir << "\n";
  if (cfg.or_threshold < 0.0) {
    out << "or_threshold = ci\n";
  } else {
    out << "or_threshold = " << cfg.or_threshold << "\n";
  }
  out << "histogram_bins = " << cfg.histogram_bins << "\n";
  out << "l0_count_samples = " << (cfg.l0_count_samples ? "true" : "false") << "\n";
  for (const auto& [k, v] : cfg.constants.to_map()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << "const." << k << " = " << buf << "\n";
  }
  return out.str();
}

std::string effective_cache_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("FIDBENCH_CACHE_DIR")) {
    if (*env) return env;
  }
  if (!cfg.cache_dir.empty()) return cfg.cache_dir;
  return cfg.out_dir + "/cache";
}

}  // namespace ifa
