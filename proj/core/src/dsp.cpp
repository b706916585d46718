#include "ifa/dsp.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace ifa {

namespace {

// Symmetric reflection: -1 -> 0, -2 -> 1, W -> W-1, W+1 -> W-2, ...
int reflect(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

}  // namespace

LumaPlane convolve(const LumaPlane& plane, const Kernel2D& k, BorderMode border) {
  if (k.width > 2 * std::min(plane.width, plane.height) ||
      k.height > 2 * std::min(plane.width, plane.height)) {
    throw std::invalid_argument("convolve: kernel too large for plane");
  }
  LumaPlane out(plane.width, plane.height);
  const int rx = k.width / 2;
  const int ry = k.height / 2;
  for (int y = 0; y < plane.height; ++y) {
    for (int x = 0; x < plane.width; ++x) {
      double acc = 0.0;
      for (int j = 0; j < k.height; ++j) {
        const int sy = y + j - ry;
        for (int i = 0; i < k.width; ++i) {
          const int sx = x + i - rx;
          double v;
          if (border == BorderMode::kReflect) {
            v = plane.at(reflect(sx, plane.width), reflect(sy, plane.height));
          } else {
            v = (sx < 0 || sy < 0 || sx >= plane.width || sy >= plane.height)
                    ? 0.0
                    : plane.at(sx, sy);
          }
          acc += v * k.at(i, j);
        }
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

LumaPlane convolve_valid(const LumaPlane& plane, const Kernel2D& k) {
  const int ow = plane.width - k.width + 1;
  const int oh = plane.height - k.height + 1;
  if (ow <= 0 || oh <= 0) {
    throw std::invalid_argument("convolve_valid: plane smaller than kernel");
  }
  LumaPlane out(ow, oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int j = 0; j < k.height; ++j) {
        for (int i = 0; i < k.width; ++i) {
          acc += plane.at(x + i, y + j) * k.at(i, j);
        }
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

Kernel2D gaussian_window(int size, double sigma) {
  if (size <= 0 || size % 2 == 0) {
    throw std::invalid_argument("gaussian_window: size must be odd and positive");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("gaussian_window: sigma must be positive");
  }
  Kernel2D k(size, size);
  const int r = size / 2;
  double sum = 0.0;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = x - r;
      const double dy = y - r;
      const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      k.at(x, y) = w;
      sum += w;
    }
  }
  for (double& w : k.weights) w /= sum;
  return k;
}

Kernel2D box_window(int size) {
  if (size <= 0 || size % 2 == 0) {
    throw std::invalid_argument("box_window: size must be odd and positive");
  }
  Kernel2D k(size, size);
  const double w = 1.0 / (static_cast<double>(size) * size);
  for (double& t : k.weights) t = w;
  return k;
}

LumaPlane downsample2(const LumaPlane& plane) {
  if (plane.width < 2 || plane.height < 2) {
    throw std::invalid_argument("downsample2: plane must be at least 2x2");
  }
  LumaPlane out(plane.width / 2, plane.height / 2);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      out.at(x, y) = 0.25 * (plane.at(2 * x, 2 * y) + plane.at(2 * x + 1, 2 * y) +
                             plane.at(2 * x, 2 * y + 1) + plane.at(2 * x + 1, 2 * y + 1));
    }
  }
  return out;
}

LumaPlane gradient_magnitude(const LumaPlane& plane, GradientOperator op) {
  if (plane.width < 3 || plane.height < 3) {
    throw std::invalid_argument("gradient_magnitude: plane must be at least 3x3");
  }
  Kernel2D gx(3, 3);
  double a, b;  // row weights of the smoothing arm
  switch (op) {
    case GradientOperator::kSobel:
      a = 1.0; b = 2.0; break;
    case GradientOperator::kScharr:
      a = 3.0; b = 10.0; break;
    case GradientOperator::kPrewitt:
      a = 1.0; b = 1.0; break;
    default:
      throw std::invalid_argument("gradient_magnitude: unknown operator");
  }
  const double w[9] = {-a, 0, a, -b, 0, b, -a, 0, a};
  for (int i = 0; i < 9; ++i) gx.weights[i] = w[i];
  Kernel2D gy(3, 3);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 3; ++x) gy.at(x, y) = gx.at(y, x);
  }
  const LumaPlane dx = convolve(plane, gx);
  const LumaPlane dy = convolve(plane, gy);
  LumaPlane out(plane.width, plane.height);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = std::hypot(dx.samples[i], dy.samples[i]);
  }
  return out;
}

namespace {

// FFTW planning is not thread-safe; execution via the new-array interface is.
std::mutex g_fftw_mutex;

void run_fft(int width, int height, std::vector<std::complex<double>>& data, int sign) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    plan = fftw_plan_dft_2d(height, width,
                            reinterpret_cast<fftw_complex*>(data.data()),
                            reinterpret_cast<fftw_complex*>(data.data()),
                            sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    fftw_destroy_plan(plan);
  }
}

}  // namespace

Spectrum dft2(const LumaPlane& plane) {
  Spectrum s;
  s.width = plane.width;
  s.height = plane.height;
  s.bins.assign(plane.samples.begin(), plane.samples.end());
  run_fft(s.width, s.height, s.bins, FFTW_FORWARD);
  return s;
}

LumaPlane idft2(const Spectrum& spec) {
  std::vector<std::complex<double>> data = spec.bins;
  run_fft(spec.width, spec.height, data, FFTW_BACKWARD);
  LumaPlane out(spec.width, spec.height);
  const double scale = 1.0 / (static_cast<double>(spec.width) * spec.height);
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.samples[i] = data[i].real() * scale;
  }
  return out;
}

Spectrum dft2(const Spectrum& in) {
  Spectrum s = in;
  run_fft(s.width, s.height, s.bins, FFTW_FORWARD);
  return s;
}

Spectrum idft2_complex(const Spectrum& in) {
  Spectrum s = in;
  run_fft(s.width, s.height, s.bins, FFTW_BACKWARD);
  const double scale = 1.0 / (static_cast<double>(s.width) * s.height);
  for (auto& b : s.bins) b *= scale;
  return s;
}

double plane_mean(const LumaPlane& p) {
  double sum = 0.0;
  for (double v : p.samples) sum += v;
  return sum / static_cast<double>(p.samples.size());
}

double plane_stddev(const LumaPlane& p) {
  const double mu = plane_mean(p);
  double acc = 0.0;
  for (double v : p.samples) acc += (v - mu) * (v - mu);
  return std::sqrt(acc / static_cast<double>(p.samples.size()));
}

}  // namespace ifa
