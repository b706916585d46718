#ifndef IFA_CONSTANTS_HPP
#define IFA_CONSTANTS_HPP

#include <cstdint>
#include <map>
#include <string>

namespace ifa {

/// Every tunable constant of the metric implementations in one place.
/// The table is serialized into run reports and hashed into cache keys, so
/// two runs disagree on scores only if this table (or the inputs) differ.
struct MetricConstants {
  // SSIM / MS-SSIM
  double ssim_k1 = 0.01;
  double ssim_k2 = 0.03;
  int ssim_window = 11;
  double ssim_sigma = 1.5;
  double msssim_exponents[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

  // UQI
  int uqi_window = 8;

  // GSIM (gradient-similarity variant: Sobel magnitudes, luminance-weighted,
  // no masking term)
  double gsim_c = 170.0;
  double gsim_c_luma = 58.5225;  // (0.03*255)^2

  // WSNR
  double wsnr_pixels_per_degree = 32.0;

  // VIFp
  double vifp_sigma_nsq = 2.0;
  int vifp_scales = 4;

  // FSIM / FSIMc
  double fsim_t1 = 0.85;   // phase congruency
  double fsim_t2 = 160.0;  // gradient
  double fsim_t3 = 200.0;  // chroma I
  double fsim_t4 = 200.0;  // chroma Q
  double fsim_lambda = 0.03;

  // VSI
  double vsi_c1 = 1.27;   // saliency
  double vsi_c2 = 386.0;  // gradient
  double vsi_c3 = 130.0;  // chroma
  double vsi_alpha = 0.40;
  double vsi_beta = 0.02;

  // VIF (wavelet domain)
  double vif_sigma_nsq = 0.4;

  // IFC
  double ifc_sigma_nsq = 0.005;

  // NQM
  double nqm_viewing_angle_deg = 0.0;  // 0 = derive from image width (180/pi * atan(w / (3*w)) style default)

  // VSNR
  double vsnr_alpha = 0.04;
  double vsnr_viewing_distance = 3.5;  // picture heights
  double vsnr_display_peak = 100.0;    // cd/m^2
  double vsnr_black_level = 0.01;
  double vsnr_gamma = 2.3;
  int vsnr_levels = 5;

  // MAD
  double mad_beta1 = 0.467;
  double mad_beta2 = 0.130;

  std::map<std::string, double> to_map() const;

  /// FNV-1a over the canonical text serialization; used in cache keys.
  std::uint64_t hash() const;

  /// Applies a `metric.key = value` style override; unknown keys throw.
  void set(const std::string& key, double value);
};

std::string serialize_constants(const MetricConstants& c);

}  // namespace ifa

#endif
