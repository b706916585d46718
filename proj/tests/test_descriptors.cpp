#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ifa/descriptors.hpp"
#include "ifa/dsp.hpp"
#include "support.hpp"

using namespace ifa;
namespace ts = test_support;

namespace {

// Oracle: std of hand-applied Sobel magnitudes on the BT.601 luminance.
double si_oracle(const Image& img) {
  const LumaPlane y = to_luminance(img);
  auto mirror = [](int i, int n) {
    while (i < 0 || i >= n) {
      if (i < 0) i = -i - 1;
      if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
  };
  const int gx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  std::vector<double> mags;
  for (int yy = 0; yy < y.height; ++yy) {
    for (int xx = 0; xx < y.width; ++xx) {
      double sx = 0.0, sy = 0.0;
      for (int j = -1; j <= 1; ++j) {
        for (int i = -1; i <= 1; ++i) {
          const double v = y.at(mirror(xx + i, y.width), mirror(yy + j, y.height));
          sx += gx[j + 1][i + 1] * v;
          sy += gx[i + 1][j + 1] * v;
        }
      }
      mags.push_back(std::hypot(sx, sy));
    }
  }
  double mu = 0.0;
  for (double m : mags) mu += m;
  mu /= static_cast<double>(mags.size());
  double var = 0.0;
  for (double m : mags) var += (m - mu) * (m - mu);
  return std::sqrt(var / static_cast<double>(mags.size()));
}

// Two-pass mean/variance colourfulness oracle.
double cf_oracle(const Image& img) {
  std::vector<double> rg, yb;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = img.samples[i * 3], g = img.samples[i * 3 + 1],
                 b = img.samples[i * 3 + 2];
    rg.push_back(r - g);
    yb.push_back(0.5 * (r + g) - b);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto var = [&](const std::vector<double>& v) {
    const double mu = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return s / static_cast<double>(v.size());
  };
  return std::sqrt(var(rg) + var(yb)) +
         0.3 * std::sqrt(mean(rg) * mean(rg) + mean(yb) * mean(yb));
}

}  // namespace

TEST_CASE("spatial information") {
  SUBCASE("constant image is zero") {
    CHECK(spatial_information(ts::constant_image(16, 16, 3, 120)) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("step edge matches sobel oracle") {
    Image img(12, 10, 1);
    for (int y = 0; y < 10; ++y) {
      for (int x = 6; x < 12; ++x) img.at(x, y, 0) = 255;
    }
    CHECK(spatial_information(img) == doctest::Approx(si_oracle(img)).epsilon(1e-9));
  }
  SUBCASE("matches oracle on random images") {
    auto gen = ts::rng(11);
    for (int trial = 0; trial < 100; ++trial) {
      std::uniform_int_distribution<int> size(3, 20);
      const Image img = ts::random_image(size(gen), size(gen), 3, gen);
      REQUIRE(spatial_information(img) ==
              doctest::Approx(si_oracle(img)).epsilon(1e-9));
    }
  }
  SUBCASE("invariant to a constant luminance offset") {
    auto gen = ts::rng(13);
    Image img = ts::random_image(14, 14, 1, gen);
    for (auto& s : img.samples) s = static_cast<std::uint8_t>(s % 200);
    Image shifted = img;
    for (auto& s : shifted.samples) s = static_cast<std::uint8_t>(s + 40);
    CHECK(spatial_information(img) ==
          doctest::Approx(spatial_information(shifted)).epsilon(1e-9));
  }
  SUBCASE("too small") {
    CHECK_THROWS(spatial_information(ts::constant_image(2, 8, 1, 0)));
  }
}

TEST_CASE("colorfulness") {
  SUBCASE("gray is zero") {
    CHECK(colorfulness(ts::constant_image(8, 8, 3, 77)) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("constant pure red closed form") {
    Image img(6, 6, 3);
    for (int i = 0; i < 36; ++i) img.samples[i * 3] = 255;
    const double want = 0.3 * std::sqrt(255.0 * 255.0 + 127.5 * 127.5);
    CHECK(colorfulness(img) == doctest::Approx(want).epsilon(1e-12));
    CHECK(want == doctest::Approx(85.53).epsilon(1e-3));
  }
  SUBCASE("matches two-pass oracle on random images") {
    auto gen = ts::rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      std::uniform_int_distribution<int> size(1, 16);
      const Image img = ts::random_image(size(gen), size(gen), 3, gen);
      REQUIRE(colorfulness(img) == doctest::Approx(cf_oracle(img)).epsilon(1e-9));
    }
  }
  SUBCASE("invariant under pixel permutation") {
    auto gen = ts::rng(19);
    const Image img = ts::random_image(9, 9, 3, gen);
    Image perm = img;
    std::vector<int> order(81);
    for (int i = 0; i < 81; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), gen);
    for (int i = 0; i < 81; ++i) {
      for (int c = 0; c < 3; ++c) {
        perm.samples[i * 3 + c] = img.samples[order[i] * 3 + c];
      }
    }
    CHECK(colorfulness(perm) == doctest::Approx(colorfulness(img)).epsilon(1e-9));
  }
  SUBCASE("grayscale input rejected") {
    CHECK_THROWS(colorfulness(ts::constant_image(4, 4, 1, 5)));
  }
}
