#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ifa/dsp.hpp"
#include "ifa/metrics.hpp"

namespace ifa {

namespace {

void require_shape_match(const Image& a, const Image& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("image pair shape mismatch");
  }
}

bool identical(const Image& a, const Image& b) {
  return a.same_shape(b) && a.samples == b.samples;
}

MetricScore perfect(Metric m, double value, bool unbounded = false) {
  MetricScore s;
  s.metric = m;
  s.value = unbounded ? std::numeric_limits<double>::infinity() : value;
  s.unbounded_perfect = unbounded;
  return s;
}

MetricScore finite(Metric m, double value) {
  MetricScore s;
  s.metric = m;
  s.value = value;
  return s;
}

LumaPlane multiply(const LumaPlane& a, const LumaPlane& b) {
  LumaPlane out(a.width, a.height);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = a.samples[i] * b.samples[i];
  }
  return out;
}

}  // namespace

MetricScore psnr(const Image& ref, const Image& test, const MetricConstants&) {
  require_shape_match(ref, test);
  double mse = 0.0;
  for (std::size_t i = 0; i < ref.samples.size(); ++i) {
    const double d = static_cast<double>(ref.samples[i]) - test.samples[i];
    mse += d * d;
  }
  mse /= static_cast<double>(ref.samples.size());
  if (mse == 0.0) return perfect(Metric::kPsnr, 0.0, true);
  return finite(Metric::kPsnr, 10.0 * std::log10(255.0 * 255.0 / mse));
}

MetricScore ssim_plane(const LumaPlane& ref, const LumaPlane& test,
                       const MetricConstants& c) {
  if (ref.width < c.ssim_window || ref.height < c.ssim_window) {
    throw std::invalid_argument("ssim: image smaller than window");
  }
  if (ref.samples == test.samples) return perfect(Metric::kSsim, 1.0);

  const double c1 = (c.ssim_k1 * 255.0) * (c.ssim_k1 * 255.0);
  const double c2 = (c.ssim_k2 * 255.0) * (c.ssim_k2 * 255.0);
  const Kernel2D win = gaussian_window(c.ssim_window, c.ssim_sigma);

  const LumaPlane mu1 = convolve_valid(ref, win);
  const LumaPlane mu2 = convolve_valid(test, win);
  const LumaPlane rr = convolve_valid(multiply(ref, ref), win);
  const LumaPlane tt = convolve_valid(multiply(test, test), win);
  const LumaPlane rt = convolve_valid(multiply(ref, test), win);

  double acc = 0.0;
  for (std::size_t i = 0; i < mu1.samples.size(); ++i) {
    const double m1 = mu1.samples[i], m2 = mu2.samples[i];
    const double s1 = rr.samples[i] - m1 * m1;
    const double s2 = tt.samples[i] - m2 * m2;
    const double s12 = rt.samples[i] - m1 * m2;
    acc += ((2.0 * m1 * m2 + c1) * (2.0 * s12 + c2)) /
           ((m1 * m1 + m2 * m2 + c1) * (s1 + s2 + c2));
  }
  return finite(Metric::kSsim, acc / static_cast<double>(mu1.samples.size()));
}

MetricScore ssim(const Image& ref, const Image& test, const MetricConstants& c) {
  require_shape_match(ref, test);
  MetricScore s = ssim_plane(to_luminance(ref), to_luminance(test), c);
  s.metric = Metric::kSsim;
  return s;
}

namespace {

// Mean luminance / contrast-structure terms of one scale, valid pooling.
void ssim_scale_terms(const LumaPlane& ref, const LumaPlane& test,
                      const MetricConstants& c, double* l_out, double* cs_out) {
  const double c1 = (c.ssim_k1 * 255.0) * (c.ssim_k1 * 255.0);
  const double c2 = (c.ssim_k2 * 255.0) * (c.ssim_k2 * 255.0);
  const Kernel2D win = gaussian_window(c.ssim_window, c.ssim_sigma);

  const LumaPlane mu1 = convolve_valid(ref, win);
  const LumaPlane mu2 = convolve_valid(test, win);
  const LumaPlane rr = convolve_valid(multiply(ref, ref), win);
  const LumaPlane tt = convolve_valid(multiply(test, test), win);
  const LumaPlane rt = convolve_valid(multiply(ref, test), win);

  double l_acc = 0.0, cs_acc = 0.0;
  for (std::size_t i = 0; i < mu1.samples.size(); ++i) {
    const double m1 = mu1.samples[i], m2 = mu2.samples[i];
    const double s1 = rr.samples[i] - m1 * m1;
    const double s2 = tt.samples[i] - m2 * m2;
    const double s12 = rt.samples[i] - m1 * m2;
    l_acc += (2.0 * m1 * m2 + c1) / (m1 * m1 + m2 * m2 + c1);
    cs_acc += (2.0 * s12 + c2) / (s1 + s2 + c2);
  }
  *l_out = l_acc / static_cast<double>(mu1.samples.size());
  *cs_out = cs_acc / static_cast<double>(mu1.samples.size());
}

}  // namespace

MetricScore ms_ssim_plane(const LumaPlane& ref, const LumaPlane& test,
                          const MetricConstants& c) {
  if (ref.width < c.ssim_window || ref.height < c.ssim_window) {
    throw std::invalid_argument("ms_ssim: image smaller than window");
  }
  if (ref.samples == test.samples) return perfect(Metric::kMsSsim, 1.0);

  // maximum feasible scale count, up to the canonical 5
  int scales = 1;
  {
    int md = std::min(ref.width, ref.height);
    while (scales < 5 && md / 2 >= c.ssim_window) {
      md /= 2;
      ++scales;
    }
  }
  double weights[5];
  double wsum = 0.0;
  for (int i = 0; i < scales; ++i) wsum += c.msssim_exponents[i];
  for (int i = 0; i < scales; ++i) weights[i] = c.msssim_exponents[i] / wsum;

  LumaPlane r = ref, t = test;
  double score = 1.0;
  for (int s = 0; s < scales; ++s) {
    double l, cs;
    ssim_scale_terms(r, t, c, &l, &cs);
    const double base = s == scales - 1 ? l * cs : cs;
    score *= std::pow(std::max(base, 1e-10), weights[s]);
    if (s + 1 < scales) {
      r = downsample2(r);
      t = downsample2(t);
    }
  }
  MetricScore out = finite(Metric::kMsSsim, score);
  if (scales < 5) {
    out.note = "msssim_scales=" + std::to_string(scales);
  }
  return out;
}

MetricScore ms_ssim(const Image& ref, const Image& test, const MetricConstants& c) {
  require_shape_match(ref, test);
  MetricScore s = ms_ssim_plane(to_luminance(ref), to_luminance(test), c);
  s.metric = Metric::kMsSsim;
  return s;
}

MetricScore uqi_plane(const LumaPlane& ref, const LumaPlane& test,
                      const MetricConstants& c) {
  const int w = c.uqi_window;
  if (ref.width < w || ref.height < w) {
    throw std::invalid_argument("uqi: image smaller than window");
  }
  if (ref.samples == test.samples) {
    // exact 1.0 on identity, but a constant plane still has no defined window
    const bool constant = std::all_of(
        ref.samples.begin(), ref.samples.end(),
        [&](double v) { return v == ref.samples.front(); });
    if (!constant) return perfect(Metric::kUqi, 1.0);
  }

  // The canonical window is 8x8 (even), so build the window sums directly.
  double acc = 0.0;
  std::size_t used = 0;
  const double n = static_cast<double>(w) * w;
  for (int y = 0; y + w <= ref.height; ++y) {
    for (int x = 0; x + w <= ref.width; ++x) {
      double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
      for (int j = 0; j < w; ++j) {
        for (int i = 0; i < w; ++i) {
          const double a = ref.at(x + i, y + j);
          const double b = test.at(x + i, y + j);
          s1 += a;
          s2 += b;
          s11 += a * a;
          s22 += b * b;
          s12 += a * b;
        }
      }
      const double m1 = s1 / n, m2 = s2 / n;
      const double v1 = s11 / n - m1 * m1;
      const double v2 = s22 / n - m2 * m2;
      const double cov = s12 / n - m1 * m2;
      const double denom = (v1 + v2) * (m1 * m1 + m2 * m2);
      if (denom == 0.0) continue;  // undefined window, skipped from pooling
      acc += 4.0 * cov * m1 * m2 / denom;
      ++used;
    }
  }
  if (used == 0) {
    throw std::invalid_argument("uqi: every window undefined (constant inputs)");
  }
  return finite(Metric::kUqi, acc / static_cast<double>(used));
}

MetricScore uqi(const Image& ref, const Image& test, const MetricConstants& c) {
  require_shape_match(ref, test);
  MetricScore s = uqi_plane(to_luminance(ref), to_luminance(test), c);
  s.metric = Metric::kUqi;
  return s;
}

MetricScore gsim_plane(const LumaPlane& ref, const LumaPlane& test,
                       const MetricConstants& c) {
  if (ref.width < 3 || ref.height < 3) {
    throw std::invalid_argument("gsim: image smaller than 3x3");
  }
  if (ref.samples == test.samples) return perfect(Metric::kGsim, 1.0);

  const LumaPlane g1 = gradient_magnitude(ref, GradientOperator::kSobel);
  const LumaPlane g2 = gradient_magnitude(test, GradientOperator::kSobel);
  double acc = 0.0;
  for (std::size_t i = 0; i < ref.samples.size(); ++i) {
    const double a = g1.samples[i], b = g2.samples[i];
    const double g = (2.0 * a * b + c.gsim_c) / (a * a + b * b + c.gsim_c);
    const double x = ref.samples[i], y = test.samples[i];
    const double l = (2.0 * x * y + c.gsim_c_luma) / (x * x + y * y + c.gsim_c_luma);
    acc += l * g;
  }
  return finite(Metric::kGsim, acc / static_cast<double>(ref.samples.size()));
}

MetricScore gsim(const Image& ref, const Image& test, const MetricConstants& c) {
  require_shape_match(ref, test);
  MetricScore s = gsim_plane(to_luminance(ref), to_luminance(test), c);
  s.metric = Metric::kGsim;
  return s;
}

double csf_mannos_sakrison(double cycles_per_degree) {
  static const double peak = [] {
    double best = 0.0;
    for (double r = 0.0; r <= 60.0; r += 1e-3) {
      const double v = 2.6 * (0.0192 + 0.114 * r) *
                       std::exp(-std::pow(0.114 * r, 1.1));
      if (v > best) best = v;
    }
    return best;
  }();
  const double r = cycles_per_degree;
  return 2.6 * (0.0192 + 0.114 * r) * std::exp(-std::pow(0.114 * r, 1.1)) / peak;
}

MetricScore wsnr_plane(const LumaPlane& ref, const LumaPlane& test,
                       const MetricConstants& c) {
  if (ref.samples == test.samples) return perfect(Metric::kWsnr, 0.0, true);

  LumaPlane err(ref.width, ref.height);
  for (std::size_t i = 0; i < err.samples.size(); ++i) {
    err.samples[i] = ref.samples[i] - test.samples[i];
  }
  const Spectrum xs = dft2(ref);
  const Spectrum es = dft2(err);

  const int W = ref.width, H = ref.height;
  double sig = 0.0, noise = 0.0;
  for (int v = 0; v < H; ++v) {
    const double fv = (v <= H / 2 ? v : v - H) / static_cast<double>(H);
    for (int u = 0; u < W; ++u) {
      const double fu = (u <= W / 2 ? u : u - W) / static_cast<double>(W);
      const double cpd = std::hypot(fu, fv) * c.wsnr_pixels_per_degree;
      const double wgt = csf_mannos_sakrison(cpd);
      sig += std::norm(xs.at(u, v)) * wgt * wgt;
      noise += std::norm(es.at(u, v)) * wgt * wgt;
    }
  }
  if (noise == 0.0) return perfect(Metric::kWsnr, 0.0, true);
  return finite(Metric::kWsnr, 10.0 * std::log10(sig / noise));
}

MetricScore wsnr(const Image& ref, const Image& test, const MetricConstants& c) {
  require_shape_match(ref, test);
  MetricScore s = wsnr_plane(to_luminance(ref), to_luminance(test), c);
  s.metric = Metric::kWsnr;
  return s;
}

namespace {

LumaPlane decimate2(const LumaPlane& p) {
  LumaPlane out((p.width + 1) / 2, (p.height + 1) / 2);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      out.at(x, y) = p.at(2 * x, 2 * y);
    }
  }
  return out;
}

}  // namespace

MetricScore vifp_plane(const LumaPlane& ref0, const LumaPlane& test0,
                       const MetricConstants& c) {
  if (ref0.width < 32 || ref0.height < 32) {
    throw std::invalid_argument("vifp: image smaller than 32x32");
  }
  if (ref0.samples == test0.samples) return perfect(Metric::kVifp, 1.0);

  LumaPlane ref = ref0, test = test0;
  double num = 0.0, den = 0.0;
  const double sn = c.vifp_sigma_nsq;
  for (int scale = 1; scale <= c.vifp_scales; ++scale) {
    const int N = (1 << (c.vifp_scales - scale + 1)) + 1;
    const Kernel2D win = gaussian_window(N, N / 5.0);
    if (scale > 1) {
      ref = decimate2(convolve_valid(ref, win));
      test = decimate2(convolve_valid(test, win));
    }
    const LumaPlane mu1 = convolve_valid(ref, win);
    const LumaPlane mu2 = convolve_valid(test, win);
    const LumaPlane rr = convolve_valid(multiply(ref, ref), win);
    const LumaPlane tt = convolve_valid(multiply(test, test), win);
    const LumaPlane rt = convolve_valid(multiply(ref, test), win);
    for (std::size_t i = 0; i < mu1.samples.size(); ++i) {
      const double m1 = mu1.samples[i], m2 = mu2.samples[i];
      double s1 = std::max(rr.samples[i] - m1 * m1, 0.0);
      double s2 = std::max(tt.samples[i] - m2 * m2, 0.0);
      const double s12 = rt.samples[i] - m1 * m2;

      double g = s12 / (s1 + 1e-10);
      double sv = s2 - g * s12;
      if (s1 < 1e-10) {
        g = 0.0;
        sv = s2;
        s1 = 0.0;
      }
      if (s2 < 1e-10) {
        g = 0.0;
        sv = 0.0;
      }
      if (g < 0.0) {
        sv = s2;
        g = 0.0;
      }
      sv = std::max(sv, 1e-10);
      num += std::log10(1.0 + g * g * s1 / (sv + sn));
      den += std::log10(1.0 + s1 / sn);
    }
  }
  if (den == 0.0) {
    throw std::invalid_argument("vifp: reference carries no information");
  }
  return finite(Metric::kVifp, num / den);
}

MetricScore vifp(const Image& ref, const Image& test, const MetricConstants& c) {
  require_shape_match(ref, test);
  MetricScore s = vifp_plane(to_luminance(ref), to_luminance(test), c);
  s.metric = Metric::kVifp;
  return s;
}

}  // namespace ifa
