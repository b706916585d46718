#ifndef FIDBENCH_TEST_SUPPORT_HPP
#define FIDBENCH_TEST_SUPPORT_HPP

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "ifa/image.hpp"

namespace test_support {

inline std::mt19937_64 rng(std::uint64_t seed = 20240817ULL) {
  return std::mt19937_64(seed);
}

inline ifa::Image random_image(int w, int h, int c, std::mt19937_64& gen) {
  ifa::Image img(w, h, c);
  std::uniform_int_distribution<int> dist(0, 255);
  for (auto& s : img.samples) s = static_cast<std::uint8_t>(dist(gen));
  return img;
}

inline ifa::Image constant_image(int w, int h, int c, std::uint8_t v) {
  ifa::Image img(w, h, c);
  for (auto& s : img.samples) s = v;
  return img;
}

inline ifa::LumaPlane random_plane(int w, int h, std::mt19937_64& gen) {
  ifa::LumaPlane p(w, h);
  std::uniform_real_distribution<double> dist(0.0, 255.0);
  for (auto& s : p.samples) s = dist(gen);
  return p;
}

// row-major ramp: value = x + y*width, wrapped into 0..255
inline ifa::LumaPlane ramp_plane(int w, int h) {
  ifa::LumaPlane p(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) p.at(x, y) = (x + y * w) % 256;
  }
  return p;
}

// Additive Gaussian noise, clamped to [0,255], fixed generator.
inline ifa::Image noisy_image(const ifa::Image& src, double sigma,
                              std::mt19937_64& gen) {
  ifa::Image out = src;
  std::normal_distribution<double> dist(0.0, sigma);
  for (auto& s : out.samples) {
    double v = s + dist(gen);
    if (v < 0) v = 0;
    if (v > 255) v = 255;
    s = static_cast<std::uint8_t>(v + 0.5);
  }
  return out;
}

// Structured synthetic content so metrics see edges and texture, not noise.
inline ifa::Image synthetic_content(int w, int h, int variant) {
  ifa::Image img(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int r = 0, g = 0, b = 0;
      switch (variant % 3) {
        case 0:  // diagonal gradient + grid
          r = (x + y) * 255 / (w + h);
          g = (x % 32 < 16) == (y % 32 < 16) ? 200 : 55;
          b = x * 255 / w;
          break;
        case 1:  // concentric rings
        {
          const double cx = x - w / 2.0, cy = y - h / 2.0;
          const double d = std::sqrt(cx * cx + cy * cy);
          r = static_cast<int>(127.5 + 127.5 * std::sin(d * 0.2));
          g = static_cast<int>(127.5 + 127.5 * std::cos(d * 0.13));
          b = (static_cast<int>(d) % 64) * 4;
          break;
        }
        default:  // vertical bars with varying luminance
          r = (x % 40) * 6;
          g = y * 255 / h;
          b = ((x / 20) % 2) ? 230 : 30;
          break;
      }
      img.at(x, y, 0) = static_cast<std::uint8_t>(r);
      img.at(x, y, 1) = static_cast<std::uint8_t>(g);
      img.at(x, y, 2) = static_cast<std::uint8_t>(b);
    }
  }
  return img;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    base_ = std::filesystem::temp_directory_path() /
            ("fidbench_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(base_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(base_, ec);
  }
  std::string path(const std::string& name = "") const {
    return name.empty() ? base_.string() : (base_ / name).string();
  }

 private:
  std::filesystem::path base_;
};

}  // namespace test_support

#endif
