#ifndef IFA_METRICS_HPP
#define IFA_METRICS_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ifa/constants.hpp"
#include "ifa/image.hpp"

namespace ifa {

/// Metric identifiers in report row order.
enum class Metric {
  kSsim,
  kMsSsim,
  kVsi,
  kVif,
  kVifp,
  kMad,
  kWsnr,
  kFsim,
  kFsimc,
  kPsnr,
  kUqi,
  kIfc,
  kNqm,
  kGsim,
  kVsnr,
  kL0,
  kL2,
  kLinf,
};

struct MetricInfo {
  Metric id;
  const char* name;
  int tier;            // 1 = always built, 2 = feature-gated filterbank metrics
  bool higher_better;  // polarity; drives correlation-sign handling downstream
  bool snr_type;       // unbounded on identical pairs
};

const MetricInfo& metric_info(Metric m);
const std::vector<MetricInfo>& all_metrics();
std::optional<Metric> metric_from_name(const std::string& name);

/// A single metric evaluation. For PSNR/WSNR-style metrics an identical pair
/// has no finite score; unbounded_perfect marks that case and value is +inf.
struct MetricScore {
  Metric metric = Metric::kPsnr;
  double value = 0.0;
  bool unbounded_perfect = false;
  std::string pair_id;
  std::string note;   // informational flags (e.g. reduced MS-SSIM pyramid)
  std::string error;  // non-empty if this metric failed on this pair

  bool ok() const { return error.empty(); }
};

class MetricNotEnabled : public std::runtime_error {
 public:
  explicit MetricNotEnabled(const std::string& name)
      : std::runtime_error("metric not enabled: " + name) {}
};

// Tier 1
MetricScore psnr(const Image& ref, const Image& test, const MetricConstants& c = {});
MetricScore ssim(const Image& ref, const Image& test, const MetricConstants& c = {});
MetricScore ms_ssim(const Image& ref, const Image& test, const MetricConstants& c = {});
MetricScore uqi(const Image& ref, const Image& test, const MetricConstants& c = {});
MetricScore gsim(const Image& ref, const Image& test, const MetricConstants& c = {});
MetricScore wsnr(const Image& ref, const Image& test, const MetricConstants& c = {});
MetricScore vifp(const Image& ref, const Image& test, const MetricConstants& c = {});

/// Tier-2 dispatch. Throws MetricNotEnabled unless m is in `enabled`.
MetricScore compute_tier2(Metric m, const Image& ref, const Image& test,
                          const std::set<Metric>& enabled,
                          const MetricConstants& c = {});

/// Scores one pair against every requested metric, in enum order.
/// Per-metric failures are reported in the score's error field; the batch
/// never aborts. `metrics` must be nonempty.
std::vector<MetricScore> score_all(const Image& ref, const Image& test,
                                   const std::set<Metric>& metrics,
                                   const MetricConstants& c = {},
                                   const std::string& pair_id = {});

/// Tier-1 FR metrics plus the three norms.
std::set<Metric> tier1_metrics();
std::set<Metric> tier2_metrics();

/// Plane-level entry points used by tests and tier-2 internals.
MetricScore ssim_plane(const LumaPlane& ref, const LumaPlane& test, const MetricConstants& c);
MetricScore ms_ssim_plane(const LumaPlane& ref, const LumaPlane& test, const MetricConstants& c);
MetricScore uqi_plane(const LumaPlane& ref, const LumaPlane& test, const MetricConstants& c);
MetricScore gsim_plane(const LumaPlane& ref, const LumaPlane& test, const MetricConstants& c);
MetricScore wsnr_plane(const LumaPlane& ref, const LumaPlane& test, const MetricConstants& c);
MetricScore vifp_plane(const LumaPlane& ref, const LumaPlane& test, const MetricConstants& c);

/// Mannos-Sakrison contrast sensitivity, peak-normalized to 1, as a function
/// of radial spatial frequency in cycles/degree.
double csf_mannos_sakrison(double cycles_per_degree);

}  // namespace ifa

#endif
