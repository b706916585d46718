#include "ifa/descriptors.hpp"

#include <cmath>
#include <stdexcept>

#include "ifa/dsp.hpp"

namespace ifa {

double spatial_information(const Image& img) {
  if (img.width < 3 || img.height < 3) {
    throw std::invalid_argument("spatial_information: image too small");
  }
  const LumaPlane grad =
      gradient_magnitude(to_luminance(img), GradientOperator::kSobel);
  return plane_stddev(grad);
}

double colorfulness(const Image& img) {
  if (img.channels != 3) {
    throw std::invalid_argument("colorfulness: requires a 3-channel image");
  }
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  double sum_rg = 0.0, sum_yb = 0.0, sq_rg = 0.0, sq_yb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = img.samples[i * 3];
    const double g = img.samples[i * 3 + 1];
    const double b = img.samples[i * 3 + 2];
    const double rg = r - g;
    const double yb = 0.5 * (r + g) - b;
    sum_rg += rg;
    sum_yb += yb;
    sq_rg += rg * rg;
    sq_yb += yb * yb;
  }
  const double mu_rg = sum_rg / n;
  const double mu_yb = sum_yb / n;
  const double var_rg = sq_rg / n - mu_rg * mu_rg;
  const double var_yb = sq_yb / n - mu_yb * mu_yb;
  return std::sqrt(std::max(var_rg + var_yb, 0.0)) +
         0.3 * std::sqrt(mu_rg * mu_rg + mu_yb * mu_yb);
}

}  // namespace ifa
