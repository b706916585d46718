#ifndef IFA_DESCRIPTORS_HPP
#define IFA_DESCRIPTORS_HPP

#include <string>

#include "ifa/image.hpp"

namespace ifa {

struct ContentDescriptor {
  std::string stimulus_id;
  double si = 0.0;
  double cf = 0.0;
  bool cf_applicable = true;  // false for grayscale content
};

/// Spatial information: standard deviation of the Sobel gradient magnitude
/// of the luminance plane (still-image reading; the video form takes a max
/// over frames, which collapses to this for a single frame).
double spatial_information(const Image& img);

/// Hasler-Suesstrunk colourfulness:
/// rg = R-G, yb = (R+G)/2 - B,
/// CF = sqrt(var(rg)+var(yb)) + 0.3*sqrt(mean(rg)^2+mean(yb)^2).
/// Requires 3 channels.
double colorfulness(const Image& img);

}  // namespace ifa

#endif
