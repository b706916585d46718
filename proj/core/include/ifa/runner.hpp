#ifndef IFA_RUNNER_HPP
#define IFA_RUNNER_HPP

#include <string>
#include <vector>

#include "ifa/config.hpp"
#include "ifa/manifest.hpp"
#include "ifa/metrics.hpp"

namespace ifa {

struct PairError {
  std::string stimulus_id;
  std::string message;
};

struct BatchResult {
  std::vector<MetricScore> scores;  // sorted by stimulus_id, then metric order
  std::vector<PairError> errors;
};

/// Scores every manifest pair against the configured metric set with a
/// bounded worker pool. Results are cached keyed by (pair content hash,
/// metric, constants hash); cache writes are write-then-rename so
/// concurrent runs cannot corrupt entries. Output order never depends on
/// completion order.
BatchResult score_manifest(const Manifest& manifest, const RunConfig& cfg);

/// `stimulus_id,metric,value` rows; unbounded-perfect scores print as inf.
std::string score_table_csv(const BatchResult& batch);

/// FNV-1a over a file's bytes.
std::uint64_t hash_file(const std::string& path);

}  // namespace ifa

#endif
