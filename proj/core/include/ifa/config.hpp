#ifndef IFA_CONFIG_HPP
#define IFA_CONFIG_HPP

#include <set>
#include <string>

#include "ifa/constants.hpp"
#include "ifa/metrics.hpp"

namespace ifa {

/// Resolved run configuration: config file < environment < command line.
struct RunConfig {
  std::set<Metric> metrics = tier1_metrics();
  MetricConstants constants;
  double or_threshold = -1.0;  // <0: CI-based outlier ratio; >=0: fixed band
  int jobs = 1;
  bool use_cache = true;
  std::string cache_dir;  // empty: <out_dir>/cache; FIDBENCH_CACHE_DIR overrides
  std::string out_dir = ".";
  bool l0_count_samples = false;
  int histogram_bins = 8;

  void validate() const;
};

/// Parses a `key = value` config file ('#' comments). Unknown keys throw.
/// Recognized keys: metrics, jobs, cache_dir, out_dir, no_cache,
/// or_threshold, histogram_bins, l0_count_samples, const.<name>.
RunConfig load_config(const std::string& path, RunConfig base = {});
void apply_config_line(RunConfig& cfg, const std::string& key,
                       const std::string& value);

/// Parses "tier1", "tier2", "all" or a comma-separated metric name list.
std::set<Metric> parse_metric_set(const std::string& spec);

/// Serializes the resolved configuration (including the full constants
/// table) for the per-run reproducibility snapshot.
std::string serialize_config(const RunConfig& cfg);

/// Cache root after applying the FIDBENCH_CACHE_DIR override.
std::string effective_cache_dir(const RunConfig& cfg);

}  // namespace ifa

#endif
