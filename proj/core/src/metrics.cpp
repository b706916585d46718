#include "ifa/metrics.hpp"

#include <cctype>
#include "ifa/norms.hpp"

namespace ifa {

namespace {

const std::vector<MetricInfo> kMetricTable = {
    {Metric::kSsim, "SSIM", 1, true, false},
    {Metric::kMsSsim, "MS-SSIM", 1, true, false},
    {Metric::kVsi, "VSI", 2, true, false},
    {Metric::kVif, "VIF", 2, true, false},
    {Metric::kVifp, "VIFp", 1, true, false},
    {Metric::kMad, "MAD", 2, false, false},
    {Metric::kWsnr, "WSNR", 1, true, true},
    {Metric::kFsim, "FSIM", 2, true, false},
    {Metric::kFsimc, "FSIMc", 2, true, false},
    {Metric::kPsnr, "PSNR", 1, true, true},
    {Metric::kUqi, "UQI", 1, true, false},
    {Metric::kIfc, "IFC", 2, true, true},  // unnormalized: diverges on identity
    {Metric::kNqm, "NQM", 2, true, true},
    {Metric::kGsim, "GSIM", 1, true, false},
    {Metric::kVsnr, "VSNR", 2, true, true},
    {Metric::kL0, "L0", 1, false, false},
    {Metric::kL2, "L2", 1, false, false},
    {Metric::kLinf, "Linf", 1, false, false},
};

}  // namespace

const std::vector<MetricInfo>& all_metrics() { return kMetricTable; }

const MetricInfo& metric_info(Metric m) {
  for (const auto& info : kMetricTable) {
    if (info.id == m) return info;
  }
  throw std::invalid_argument("unknown metric id");
}

std::optional<Metric> metric_from_name(const std::string& name) {
  // case-insensitive, '-'/'_' interchangeable
  auto canon = [](const std::string& s) {
    std::string out;
    for (char ch : s) {
      if (ch == '-' || ch == '_') continue;
      out += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    }
    return out;
  };
  const std::string key = canon(name);
  for (const auto& info : kMetricTable) {
    if (key == canon(info.name)) return info.id;
  }
  if (key == "LINFTY" || key == "L8") return Metric::kLinf;
  return std::nullopt;
}

std::set<Metric> tier1_metrics() {
  std::set<Metric> out;
  for (const auto& info : kMetricTable) {
    if (info.tier == 1) out.insert(info.id);
  }
  return out;
}

std::set<Metric> tier2_metrics() {
  std::set<Metric> out;
  for (const auto& info : kMetricTable) {
    if (info.tier == 2) out.insert(info.id);
  }
  return out;
}

std::vector<MetricScore> score_all(const Image& ref, const Image& test,
                                   const std::set<Metric>& metrics,
                                   const MetricConstants& c,
                                   const std::string& pair_id) {
  if (metrics.empty()) {
    throw std::invalid_argument("score_all: empty metric set");
  }
  std::vector<MetricScore> out;
  out.reserve(metrics.size());
  // kMetricTable order = report row order
  for (const auto& info : kMetricTable) {
    if (!metrics.count(info.id)) continue;
    MetricScore s;
    s.metric = info.id;
    s.pair_id = pair_id;
    try {
      switch (info.id) {
        case Metric::kPsnr: s = psnr(ref, test, c); break;
        case Metric::kSsim: s = ssim(ref, test, c); break;
        case Metric::kMsSsim: s = ms_ssim(ref, test, c); break;
        case Metric::kUqi: s = uqi(ref, test, c); break;
        case Metric::kGsim: s = gsim(ref, test, c); break;
        case Metric::kWsnr: s = wsnr(ref, test, c); break;
        case Metric::kVifp: s = vifp(ref, test, c); break;
        case Metric::kL0:
          s.value = static_cast<double>(l0_norm(ref, test));
          break;
        case Metric::kL2: s.value = l2_norm(ref, test); break;
        case Metric::kLinf: s.value = linf_norm(ref, test); break;
        default:
          s = compute_tier2(info.id, ref, test, metrics, c);
          break;
      }
      s.metric = info.id;
      s.pair_id = pair_id;
    } catch (const std::exception& e) {
      s.error = e.what();
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ifa
