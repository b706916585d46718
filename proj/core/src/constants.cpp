#include "ifa/constants.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ifa {

std::map<std::string, double> MetricConstants::to_map() const {
  std::map<std::string, double> m;
  m["ssim.k1"] = ssim_k1;
  m["ssim.k2"] = ssim_k2;
  m["ssim.window"] = ssim_window;
  m["ssim.sigma"] = ssim_sigma;
  for (int i = 0; i < 5; ++i) {
    m["msssim.exponent" + std::to_string(i + 1)] = msssim_exponents[i];
  }
  m["uqi.window"] = uqi_window;
  m["gsim.c"] = gsim_c;
  m["gsim.c_luma"] = gsim_c_luma;
  m["wsnr.pixels_per_degree"] = wsnr_pixels_per_degree;
  m["vifp.sigma_nsq"] = vifp_sigma_nsq;
  m["vifp.scales"] = vifp_scales;
  m["fsim.t1"] = fsim_t1;
  m["fsim.t2"] = fsim_t2;
  m["fsim.t3"] = fsim_t3;
  m["fsim.t4"] = fsim_t4;
  m["fsim.lambda"] = fsim_lambda;
  m["vsi.c1"] = vsi_c1;
  m["vsi.c2"] = vsi_c2;
  m["vsi.c3"] = vsi_c3;
  m["vsi.alpha"] = vsi_alpha;
  m["vsi.beta"] = vsi_beta;
  m["vif.sigma_nsq"] = vif_sigma_nsq;
  m["ifc.sigma_nsq"] = ifc_sigma_nsq;
  m["nqm.viewing_angle_deg"] = nqm_viewing_angle_deg;
  m["vsnr.alpha"] = vsnr_alpha;
  m["vsnr.viewing_distance"] = vsnr_viewing_distance;
  m["vsnr.display_peak"] = vsnr_display_peak;
  m["vsnr.black_level"] = vsnr_black_level;
  m["vsnr.gamma"] = vsnr_gamma;
  m["vsnr.levels"] = vsnr_levels;
  m["mad.beta1"] = mad_beta1;
  m["mad.beta2"] = mad_beta2;
  return m;
}

void MetricConstants::set(const std::string& key, double value) {
  struct Entry {
    const char* name;
    double* slot;
  };
  Entry entries[] = {
      {"ssim.k1", &ssim_k1},
      {"ssim.k2", &ssim_k2},
      {"ssim.sigma", &ssim_sigma},
      {"msssim.exponent1", &msssim_exponents[0]},
      {"msssim.exponent2", &msssim_exponents[1]},
      {"msssim.exponent3", &msssim_exponents[2]},
      {"msssim.exponent4", &msssim_exponents[3]},
      {"msssim.exponent5", &msssim_exponents[4]},
      {"gsim.c", &gsim_c},
      {"gsim.c_luma", &gsim_c_luma},
      {"wsnr.pixels_per_degree", &wsnr_pixels_per_degree},
      {"vifp.sigma_nsq", &vifp_sigma_nsq},
      {"fsim.t1", &fsim_t1},
      {"fsim.t2", &fsim_t2},
      {"fsim.t3", &fsim_t3},
      {"fsim.t4", &fsim_t4},
      {"fsim.lambda", &fsim_lambda},
      {"vsi.c1", &vsi_c1},
      {"vsi.c2", &vsi_c2},
      {"vsi.c3", &vsi_c3},
      {"vsi.alpha", &vsi_alpha},
      {"vsi.beta", &vsi_beta},
      {"vif.sigma_nsq", &vif_sigma_nsq},
      {"ifc.sigma_nsq", &ifc_sigma_nsq},
      {"nqm.viewing_angle_deg", &nqm_viewing_angle_deg},
      {"vsnr.alpha", &vsnr_alpha},
      {"vsnr.viewing_distance", &vsnr_viewing_distance},
      {"vsnr.display_peak", &vsnr_display_peak},
      {"vsnr.black_level", &vsnr_black_level},
      {"vsnr.gamma", &vsnr_gamma},
      {"mad.beta1", &mad_beta1},
      {"mad.beta2", &mad_beta2},
  };
  for (auto& e : entries) {
    if (key == e.name) {
      *e.slot = value;
      return;
    }
  }
  if (key == "ssim.window") {
    ssim_window = static_cast<int>(value);
    return;
  }
  if (key == "uqi.window") {
    uqi_window = static_cast<int>(value);
    return;
  }
  if (key == "vifp.scales") {
    vifp_scales = static_cast<int>(value);
    return;
  }
  if (key == "vsnr.levels") {
    vsnr_levels = static_cast<int>(value);
    return;
  }
  throw std::invalid_argument("unknown metric constant: " + key);
}

std::string serialize_constants(const MetricConstants& c) {
  std::ostringstream out;
  char buf[64];
  for (const auto& [key, value] : c.to_map()) {
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    out << key << " = " << buf << "\n";
  }
  return out.str();
}

std::uint64_t MetricConstants::hash() const {
  const std::string text = serialize_constants(*this);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace ifa
