#ifndef IFA_IMAGE_HPP
#define IFA_IMAGE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ifa {

/// Error raised for unreadable, malformed or unsupported image files.
class ImageError : public std::runtime_error {
 public:
  explicit ImageError(const std::string& what) : std::runtime_error(what) {}
};

/// Decoded 8-bit raster, row-major, channel-interleaved.
/// channels is 1 (gray) or 3 (RGB).
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> samples;

  Image() = default;
  Image(int w, int h, int c);

  std::uint8_t at(int x, int y, int c) const {
    return samples[static_cast<std::size_t>((y * width + x) * channels + c)];
  }
  std::uint8_t& at(int x, int y, int c) {
    return samples[static_cast<std::size_t>((y * width + x) * channels + c)];
  }
  std::size_t sample_count() const { return samples.size(); }
  bool same_shape(const Image& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

/// Real-valued single-channel working plane on the 0-255 scale.
struct LumaPlane {
  int width = 0;
  int height = 0;
  std::vector<double> samples;

  LumaPlane() = default;
  LumaPlane(int w, int h, double fill = 0.0);

  double at(int x, int y) const {
    return samples[static_cast<std::size_t>(y) * width + x];
  }
  double& at(int x, int y) {
    return samples[static_cast<std::size_t>(y) * width + x];
  }
};

/// Odd-sized 2-D filter taps.
struct Kernel2D {
  int width = 0;
  int height = 0;
  std::vector<double> weights;

  Kernel2D() = default;
  Kernel2D(int w, int h);

  double at(int x, int y) const {
    return weights[static_cast<std::size_t>(y) * width + x];
  }
  double& at(int x, int y) {
    return weights[static_cast<std::size_t>(y) * width + x];
  }
};

/// Decodes a PNG (always supported) or BMP (8-bit uncompressed) file.
/// 16-bit sources are rejected rather than truncated.
Image load_image(const std::string& path);

/// Writes an 8-bit PNG. Gray for 1 channel, RGB for 3.
void save_png(const Image& img, const std::string& path);

/// BT.601 luma for 3-channel input (Y = 0.299 R + 0.587 G + 0.114 B);
/// plain copy for 1-channel input.
LumaPlane to_luminance(const Image& img);

/// Extracts channel c as a real plane.
LumaPlane channel_plane(const Image& img, int c);

inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

}  // namespace ifa

#endif
