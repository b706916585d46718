#include "ifa/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace ifa {

namespace {
void require_shape_match(const Image& a, const Image& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("image pair shape mismatch");
  }
}
}  // namespace

std::int64_t l0_norm(const Image& ref, const Image& test, bool count_samples) {
  require_shape_match(ref, test);
  std::int64_t count = 0;
  if (count_samples) {
    for (std::size_t i = 0; i < ref.samples.size(); ++i) {
      count += ref.samples[i] != test.samples[i];
    }
    return count;
  }
  const std::size_t n = static_cast<std::size_t>(ref.width) * ref.height;
  for (std::size_t p = 0; p < n; ++p) {
    for (int c = 0; c < ref.channels; ++c) {
      if (ref.samples[p * ref.channels + c] != test.samples[p * ref.channels + c]) {
        ++count;
        break;
      }
    }
  }
  return count;
}

double l2_norm(const Image& ref, const Image& test) {
  require_shape_match(ref, test);
  double acc = 0.0;
  for (std::size_t i = 0; i < ref.samples.size(); ++i) {
    const double d = (static_cast<double>(ref.samples[i]) - test.samples[i]) / 255.0;
    acc += d * d;
  }
  return std::sqrt(acc);
}

double linf_norm(const Image& ref, const Image& test) {
  require_shape_match(ref, test);
  double best = 0.0;
  for (std::size_t i = 0; i < ref.samples.size(); ++i) {
    const double d = std::abs(static_cast<double>(ref.samples[i]) - test.samples[i]) / 255.0;
    if (d > best) best = d;
  }
  return best;
}

}  // namespace ifa
