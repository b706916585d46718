#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ifa/norms.hpp"
#include "support.hpp"

using namespace ifa;
namespace ts = test_support;

namespace {

// Brute-force oracles straight off the norm definitions.
std::int64_t l0_oracle(const Image& a, const Image& b) {
  std::int64_t n = 0;
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      bool differs = false;
      for (int c = 0; c < a.channels; ++c) {
        if (a.at(x, y, c) != b.at(x, y, c)) differs = true;
      }
      n += differs;
    }
  }
  return n;
}

double lp_oracle(const Image& a, const Image& b, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const double d =
        std::abs(static_cast<double>(a.samples[i]) - b.samples[i]) / 255.0;
    acc += std::pow(d, p);
  }
  return std::pow(acc, 1.0 / p);
}

double linf_oracle(const Image& a, const Image& b) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    best = std::max(best, std::abs(static_cast<double>(a.samples[i]) -
                                   b.samples[i]) / 255.0);
  }
  return best;
}

}  // namespace

TEST_CASE("identical pairs give zero for all norms") {
  auto gen = ts::rng();
  const Image img = ts::random_image(16, 12, 3, gen);
  CHECK(l0_norm(img, img) == 0);
  CHECK(l2_norm(img, img) == 0.0);
  CHECK(linf_norm(img, img) == 0.0);
}

TEST_CASE("l0 counts pixels, not samples") {
  Image a = ts::constant_image(8, 8, 3, 50);
  Image b = a;
  b.at(3, 2, 0) = 51;  // one channel of one pixel
  CHECK(l0_norm(a, b) == 1);
  CHECK(l0_norm(a, b, /*count_samples=*/true) == 1);
  b.at(3, 2, 1) = 52;
  CHECK(l0_norm(a, b) == 1);
  CHECK(l0_norm(a, b, /*count_samples=*/true) == 2);
}

TEST_CASE("single-sample impulses") {
  Image a = ts::constant_image(4, 4, 1, 0);
  Image b = a;
  b.at(1, 1, 0) = 255;
  CHECK(l2_norm(a, b) == doctest::Approx(1.0).epsilon(1e-15));

  Image c = a;
  c.at(2, 2, 0) = 13;
  CHECK(linf_norm(a, c) == doctest::Approx(13.0 / 255.0).epsilon(1e-15));
}

TEST_CASE("random pairs match brute-force oracles") {
  auto gen = ts::rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_int_distribution<int> chan(0, 1);
    const int w = size(gen), h = size(gen), c = chan(gen) ? 3 : 1;
    const Image a = ts::random_image(w, h, c, gen);
    const Image b = ts::random_image(w, h, c, gen);
    REQUIRE(l0_norm(a, b) == l0_oracle(a, b));
    REQUIRE(l2_norm(a, b) ==
            doctest::Approx(lp_oracle(a, b, 2.0)).epsilon(1e-9));
    REQUIRE(linf_norm(a, b) == (linf_oracle(a, b)));
  }
}

TEST_CASE("norm ordering: linf <= l2 <= sqrt(n)*linf") {
  auto gen = ts::rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const Image a = ts::random_image(9, 9, 3, gen);
    const Image b = ts::random_image(9, 9, 3, gen);
    const double l2 = l2_norm(a, b);
    const double li = linf_norm(a, b);
    const double n = static_cast<double>(a.samples.size());
    CHECK(li <= l2 + 1e-12);
    CHECK(l2 <= std::sqrt(n) * li + 1e-12);
  }
}

TEST_CASE("norms are symmetric and zero iff identical") {
  auto gen = ts::rng(31);
  const Image a = ts::random_image(10, 7, 3, gen);
  Image b = a;
  b.at(0, 0, 2) ^= 1;
  CHECK(l0_norm(a, b) == l0_norm(b, a));
  CHECK(l2_norm(a, b) == (l2_norm(b, a)));
  CHECK(linf_norm(a, b) == (linf_norm(b, a)));
  CHECK(l0_norm(a, b) > 0);
  CHECK(l2_norm(a, b) > 0.0);
  CHECK(linf_norm(a, b) > 0.0);
}

TEST_CASE("l0 invariant under monotone channel remapping of both images") {
  auto gen = ts::rng(41);
  const Image a = ts::random_image(6, 6, 3, gen);
  const Image b = ts::random_image(6, 6, 3, gen);
  // value inversion is strictly monotone, so it preserves which pixels differ
  auto invert = [](const Image& img) {
    Image out = img;
    for (auto& s : out.samples) s = static_cast<std::uint8_t>(255 - s);
    return out;
  };
  CHECK(l0_norm(invert(a), invert(b)) == l0_norm(a, b));
}

TEST_CASE("shape mismatch rejected") {
  const Image a = ts::constant_image(4, 4, 3, 1);
  const Image b = ts::constant_image(4, 5, 3, 1);
  const Image c = ts::constant_image(4, 4, 1, 1);
  CHECK_THROWS(l0_norm(a, b));
  CHECK_THROWS(l2_norm(a, b));
  CHECK_THROWS(linf_norm(a, c));
}
