// Filterbank-based fidelity metrics: FSIM/FSIMc, VSI, NQM, VSNR, IFC, VIF
// (wavelet domain) and MAD. These share the log-Gabor machinery in
// loggabor.cpp, a CDF 9/7 wavelet cascade, and the contrast-sensitivity
// weighting also used by WSNR.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ifa/dsp.hpp"
#include "ifa/loggabor.hpp"
#include "ifa/metrics.hpp"

namespace ifa {

namespace {

constexpr double kPi = 3.14159265358979323846;

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

// ---------------------------------------------------------------------------
// Small plane utilities
// ---------------------------------------------------------------------------

// MATLAB-style integer-factor reduction: average over f x f blocks anchored at
// the origin; a trailing remainder narrower than f is dropped.
LumaPlane block_downsample(const LumaPlane& p, int f) {
  if (f <= 1) return p;
  const int w = p.width / f;
  const int h = p.height / f;
  LumaPlane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int dy = 0; dy < f; ++dy) {
        for (int dx = 0; dx < f; ++dx) {
          sum += p.at(x * f + dx, y * f + dy);
        }
      }
      out.at(x, y) = sum / (f * f);
    }
  }
  return out;
}

LumaPlane bilinear_resize(const LumaPlane& p, int w, int h) {
  LumaPlane out(w, h);
  const double sx = static_cast<double>(p.width) / w;
  const double sy = static_cast<double>(p.height) / h;
  for (int y = 0; y < h; ++y) {
    const double fy = std::min((y + 0.5) * sy - 0.5,
                               static_cast<double>(p.height - 1));
    const int y0 = std::max(0, static_cast<int>(std::floor(fy)));
    const int y1 = std::min(p.height - 1, y0 + 1);
    const double wy = std::clamp(fy - y0, 0.0, 1.0);
    for (int x = 0; x < w; ++x) {
      const double fx = std::min((x + 0.5) * sx - 0.5,
                                 static_cast<double>(p.width - 1));
      const int x0 = std::max(0, static_cast<int>(std::floor(fx)));
      const int x1 = std::min(p.width - 1, x0 + 1);
      const double wx = std::clamp(fx - x0, 0.0, 1.0);
      out.at(x, y) = (1 - wy) * ((1 - wx) * p.at(x0, y0) + wx * p.at(x1, y0)) +
                     wy * ((1 - wx) * p.at(x0, y1) + wx * p.at(x1, y1));
    }
  }
  return out;
}

// x^e for possibly negative x: real part of the principal complex power,
// so small negative similarity products attenuate instead of producing NaN.
double pow_signed(double x, double e) {
  if (x >= 0.0) return std::pow(x, e);
  return std::pow(-x, e) * std::cos(e * kPi);
}

LumaPlane scaled_gradient(const LumaPlane& p) {
  // Scharr magnitude with the 1/16 tap normalization the T2/C2 stabilizers
  // are calibrated against.
  LumaPlane g = gradient_magnitude(p, GradientOperator::kScharr);
  for (double& v : g.samples) v /= 16.0;
  return g;
}

struct BlockStats {
  double mean = 0.0;
  double stddev = 0.0;
  double skew = 0.0;
  double kurt = 0.0;
};

BlockStats block_stats(const LumaPlane& p, int x0, int y0, int bs) {
  BlockStats s;
  const int n = bs * bs;
  for (int y = 0; y < bs; ++y) {
    for (int x = 0; x < bs; ++x) s.mean += p.at(x0 + x, y0 + y);
  }
  s.mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (int y = 0; y < bs; ++y) {
    for (int x = 0; x < bs; ++x) {
      const double d = p.at(x0 + x, y0 + y) - s.mean;
      const double d2 = d * d;
      m2 += d2;
      m3 += d2 * d;
      m4 += d2 * d2;
    }
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  s.stddev = std::sqrt(m2);
  if (s.stddev > 1e-12) {
    s.skew = m3 / (m2 * s.stddev);
    s.kurt = m4 / (m2 * m2);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Color transforms (inputs on the 0-255 scale)
// ---------------------------------------------------------------------------

struct Planes3 {
  LumaPlane a, b, c;
};

// NTSC YIQ: luminance plus two opponent chroma axes.
Planes3 to_yiq(const Image& img) {
  Planes3 out{LumaPlane(img.width, img.height), LumaPlane(img.width, img.height),
              LumaPlane(img.width, img.height)};
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double r, g, b;
      if (img.channels == 1) {
        r = g = b = img.at(x, y, 0);
      } else {
        r = img.at(x, y, 0);
        g = img.at(x, y, 1);
        b = img.at(x, y, 2);
      }
      out.a.at(x, y) = 0.299 * r + 0.587 * g + 0.114 * b;
      out.b.at(x, y) = 0.596 * r - 0.274 * g - 0.322 * b;
      out.c.at(x, y) = 0.211 * r - 0.523 * g + 0.312 * b;
    }
  }
  return out;
}

// LMN opponent space used by the saliency-weighted similarity index.
Planes3 to_lmn(const Image& img) {
  Planes3 out{LumaPlane(img.width, img.height), LumaPlane(img.width, img.height),
              LumaPlane(img.width, img.height)};
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double r, g, b;
      if (img.channels == 1) {
        r = g = b = img.at(x, y, 0);
      } else {
        r = img.at(x, y, 0);
        g = img.at(x, y, 1);
        b = img.at(x, y, 2);
      }
      out.a.at(x, y) = 0.06 * r + 0.63 * g + 0.27 * b;
      out.b.at(x, y) = 0.30 * r + 0.04 * g - 0.35 * b;
      out.c.at(x, y) = 0.34 * r - 0.60 * g + 0.17 * b;
    }
  }
  return out;
}

// CIELAB via the direct linear-RGB matrix (the convention the saliency
// detector was published with; no sRGB gamma decode).
Planes3 to_lab(const Image& img) {
  Planes3 out{LumaPlane(img.width, img.height), LumaPlane(img.width, img.height),
              LumaPlane(img.width, img.height)};
  const double xn = 0.950456, zn = 1.088754;
  auto f = [](double t) {
    return t > 0.008856 ? std::cbrt(t) : 7.787 * t + 16.0 / 116.0;
  };
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double r, g, b;
      if (img.channels == 1) {
        r = g = b = img.at(x, y, 0) / 255.0;
      } else {
        r = img.at(x, y, 0) / 255.0;
        g = img.at(x, y, 1) / 255.0;
        b = img.at(x, y, 2) / 255.0;
      }
      const double X = 0.412453 * r + 0.357580 * g + 0.180423 * b;
      const double Y = 0.212671 * r + 0.715160 * g + 0.072169 * b;
      const double Z = 0.019334 * r + 0.119193 * g + 0.950227 * b;
      out.a.at(x, y) = Y > 0.008856 ? 116.0 * std::cbrt(Y) - 16.0 : 903.3 * Y;
      out.b.at(x, y) = 500.0 * (f(X / xn) - f(Y));
      out.c.at(x, y) = 200.0 * (f(Y) - f(Z / zn));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CDF 9/7 wavelet cascade (used by VSNR, IFC, wavelet VIF)
// ---------------------------------------------------------------------------

void lift97(std::vector<double>& x) {
  static constexpr double a1 = -1.586134342;
  static constexpr double a2 = -0.05298011854;
  static constexpr double a3 = 0.8829110762;
  static constexpr double a4 = 0.4435068522;
  static constexpr double kdc = 1.230174104914;  // lowpass DC gain before rescale
  const int n = static_cast<int>(x.size());
  auto at = [&](int i) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
    return x[i];
  };
  for (int i = 1; i < n; i += 2) x[i] += a1 * (at(i - 1) + at(i + 1));
  for (int i = 0; i < n; i += 2) x[i] += a2 * (at(i - 1) + at(i + 1));
  for (int i = 1; i < n; i += 2) x[i] += a3 * (at(i - 1) + at(i + 1));
  for (int i = 0; i < n; i += 2) x[i] += a4 * (at(i - 1) + at(i + 1));
  // Deinterleave in place: evens (lowpass, normalized to unit DC gain) first.
  std::vector<double> tmp(x.size());
  const int nlow = (n + 1) / 2;
  for (int i = 0; i < n; ++i) {
    if (i % 2 == 0) {
      tmp[i / 2] = x[i] / kdc;
    } else {
      tmp[nlow + i / 2] = x[i] * kdc;
    }
  }
  x.swap(tmp);
}

struct Subbands {
  LumaPlane ll, lh, hl, hh;
};

Subbands dwt2(const LumaPlane& p) {
  const int w = p.width;
  const int h = p.height;
  if (w < 2 || h < 2) throw std::invalid_argument("dwt2: plane too small");
  LumaPlane work = p;
  std::vector<double> line;
  line.reserve(std::max(w, h));
  for (int y = 0; y < h; ++y) {
    line.assign(work.samples.begin() + static_cast<std::size_t>(y) * w,
                work.samples.begin() + static_cast<std::size_t>(y + 1) * w);
    lift97(line);
    std::copy(line.begin(), line.end(),
              work.samples.begin() + static_cast<std::size_t>(y) * w);
  }
  for (int x = 0; x < w; ++x) {
    line.resize(h);
    for (int y = 0; y < h; ++y) line[y] = work.at(x, y);
    lift97(line);
    for (int y = 0; y < h; ++y) work.at(x, y) = line[y];
  }
  const int wl = (w + 1) / 2;
  const int hl = (h + 1) / 2;
  Subbands sb{LumaPlane(wl, hl), LumaPlane(w - wl, hl), LumaPlane(wl, h - hl),
              LumaPlane(w - wl, h - hl)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = work.at(x, y);
      if (y < hl) {
        if (x < wl) {
          sb.ll.at(x, y) = v;
        } else {
          sb.lh.at(x - wl, y) = v;
        }
      } else if (x < wl) {
        sb.hl.at(x, y - hl) = v;
      } else {
        sb.hh.at(x - wl, y - hl) = v;
      }
    }
  }
  return sb;
}

// ---------------------------------------------------------------------------
// FSIM / FSIMc
// ---------------------------------------------------------------------------

MetricScore fsim_impl(Metric m, const Image& ref, const Image& test,
                      const MetricConstants& c) {
  const bool chroma = (m == Metric::kFsimc);
  Planes3 p1 = to_yiq(ref);
  Planes3 p2 = to_yiq(test);
  const int f =
      std::max(1, static_cast<int>(std::lround(
                      std::min(ref.width, ref.height) / 256.0)));
  const LumaPlane y1 = block_downsample(p1.a, f);
  const LumaPlane y2 = block_downsample(p2.a, f);
  const LumaPlane pc1 = phase_congruency(y1);
  const LumaPlane pc2 = phase_congruency(y2);
  const LumaPlane g1 = scaled_gradient(y1);
  const LumaPlane g2 = scaled_gradient(y2);
  LumaPlane i1, i2, q1, q2;
  if (chroma) {
    i1 = block_downsample(p1.b, f);
    i2 = block_downsample(p2.b, f);
    q1 = block_downsample(p1.c, f);
    q2 = block_downsample(p2.c, f);
  }
  double num = 0.0, den = 0.0, plain = 0.0;
  const std::size_t n = pc1.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = pc1.samples[i];
    const double b = pc2.samples[i];
    const double pc_sim = (2.0 * a * b + c.fsim_t1) / (a * a + b * b + c.fsim_t1);
    const double ga = g1.samples[i];
    const double gb = g2.samples[i];
    const double g_sim =
        (2.0 * ga * gb + c.fsim_t2) / (ga * ga + gb * gb + c.fsim_t2);
    double sim = pc_sim * g_sim;
    if (chroma) {
      const double ia = i1.samples[i], ib = i2.samples[i];
      const double qa = q1.samples[i], qb = q2.samples[i];
      const double i_sim =
          (2.0 * ia * ib + c.fsim_t3) / (ia * ia + ib * ib + c.fsim_t3);
      const double q_sim =
          (2.0 * qa * qb + c.fsim_t4) / (qa * qa + qb * qb + c.fsim_t4);
      sim *= pow_signed(i_sim * q_sim, c.fsim_lambda);
    }
    const double pcm = std::max(a, b);
    num += sim * pcm;
    den += pcm;
    plain += sim;
  }
  // Featureless pair (no phase congruency anywhere): fall back to the
  // unweighted mean similarity.
  const double value = den > 0.0 ? num / den : plain / static_cast<double>(n);
  return finite(m, value);
}

// ---------------------------------------------------------------------------
// Saliency-weighted similarity (VSI) and its saliency detector
// ---------------------------------------------------------------------------

// Saliency map combining a band-pass frequency prior, a center location prior
// and a warm-color prior, computed at 256x256 and resized back; output
// min-max normalized to [0, 1].
LumaPlane saliency_map(const Image& img) {
  constexpr int kSide = 256;
  constexpr double kSigmaF = 6.2;    // log-domain bandwidth of the band-pass
  constexpr double kOmega0 = 0.002;  // normalized center frequency
  constexpr double kSigmaD = 114.0;  // center-prior spread (pixels)
  constexpr double kSigmaC = 0.25;   // color-prior spread

  Planes3 lab = to_lab(img);
  const LumaPlane l = bilinear_resize(lab.a, kSide, kSide);
  const LumaPlane a = bilinear_resize(lab.b, kSide, kSide);
  const LumaPlane b = bilinear_resize(lab.c, kSide, kSide);

  const std::vector<double> lg = radial_log_gabor(kSide, kSide, kOmega0, kSigmaF);
  auto bandpass = [&](const LumaPlane& chan) {
    Spectrum f = dft2(chan);
    for (std::size_t i = 0; i < f.bins.size(); ++i) f.bins[i] *= lg[i];
    return idft2(f);
  };
  const LumaPlane fl = bandpass(l);
  const LumaPlane fa = bandpass(a);
  const LumaPlane fb = bandpass(b);

  const auto [a_min_it, a_max_it] =
      std::minmax_element(a.samples.begin(), a.samples.end());
  const auto [b_min_it, b_max_it] =
      std::minmax_element(b.samples.begin(), b.samples.end());
  const double a_min = *a_min_it, a_span = *a_max_it - a_min + 1e-12;
  const double b_min = *b_min_it, b_span = *b_max_it - b_min + 1e-12;

  LumaPlane vs(kSide, kSide);
  const double cx = (kSide - 1) / 2.0;
  const double cy = (kSide - 1) / 2.0;
  for (int y = 0; y < kSide; ++y) {
    for (int x = 0; x < kSide; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * kSide + x;
      const double sf = std::sqrt(fl.samples[i] * fl.samples[i] +
                                  fa.samples[i] * fa.samples[i] +
                                  fb.samples[i] * fb.samples[i]);
      const double dx = x - cx, dy = y - cy;
      const double sd = std::exp(-(dx * dx + dy * dy) / (kSigmaD * kSigmaD));
      const double na = (a.samples[i] - a_min) / a_span;
      const double nb = (b.samples[i] - b_min) / b_span;
      const double sc = 1.0 - std::exp(-(na * na + nb * nb) / (kSigmaC * kSigmaC));
      vs.samples[i] = sf * sd * sc;
    }
  }
  LumaPlane out = bilinear_resize(vs, img.width, img.height);
  const auto [lo_it, hi_it] =
      std::minmax_element(out.samples.begin(), out.samples.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  if (span > 0.0) {
    for (double& v : out.samples) v = (v - lo) / span;
  } else {
    std::fill(out.samples.begin(), out.samples.end(), 0.0);
  }
  return out;
}

MetricScore vsi_impl(const Image& ref, const Image& test,
                     const MetricConstants& c) {
  const LumaPlane vs1_full = saliency_map(ref);
  const LumaPlane vs2_full = saliency_map(test);
  Planes3 p1 = to_lmn(ref);
  Planes3 p2 = to_lmn(test);
  const int f =
      std::max(1, static_cast<int>(std::lround(
                      std::min(ref.width, ref.height) / 256.0)));
  const LumaPlane vs1 = block_downsample(vs1_full, f);
  const LumaPlane vs2 = block_downsample(vs2_full, f);
  const LumaPlane l1 = block_downsample(p1.a, f);
  const LumaPlane l2 = block_downsample(p2.a, f);
  const LumaPlane m1 = block_downsample(p1.b, f);
  const LumaPlane m2 = block_downsample(p2.b, f);
  const LumaPlane n1 = block_downsample(p1.c, f);
  const LumaPlane n2 = block_downsample(p2.c, f);
  const LumaPlane g1 = scaled_gradient(l1);
  const LumaPlane g2 = scaled_gradient(l2);

  double num = 0.0, den = 0.0, plain = 0.0;
  const std::size_t n = vs1.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double sa = vs1.samples[i], sb = vs2.samples[i];
    const double s_vs = (2.0 * sa * sb + c.vsi_c1) / (sa * sa + sb * sb + c.vsi_c1);
    const double ga = g1.samples[i], gb = g2.samples[i];
    const double s_g = (2.0 * ga * gb + c.vsi_c2) / (ga * ga + gb * gb + c.vsi_c2);
    const double ma = m1.samples[i], mb = m2.samples[i];
    const double na = n1.samples[i], nb = n2.samples[i];
    const double s_m = (2.0 * ma * mb + c.vsi_c3) / (ma * ma + mb * mb + c.vsi_c3);
    const double s_n = (2.0 * na * nb + c.vsi_c3) / (na * na + nb * nb + c.vsi_c3);
    const double sim = s_vs * std::pow(s_g, c.vsi_alpha) *
                       pow_signed(s_m * s_n, c.vsi_beta);
    const double w = std::max(sa, sb);
    num += sim * w;
    den += w;
    plain += sim;
  }
  const double value = den > 0.0 ? num / den : plain / static_cast<double>(n);
  return finite(Metric::kVsi, value);
}

// ---------------------------------------------------------------------------
// NQM: restoration-model weighted SNR. Both images are decomposed into
// cosine-log octave bands; band contrast differences below the
// CSF-derived, masking-elevated visibility threshold are discarded, and the
// SNR of the remaining (visible) error is reported in dB.
// ---------------------------------------------------------------------------

// Cosine-log partition of unity over radial frequency (cycles/degree).
// Band 0 is the residual lowpass below 1 cpd; bands 1..5 are octaves centered
// at 2^k cpd; band 6 is the residual highpass.
double nqm_band_weight(int k, double f) {
  if (f <= 0.0) return k == 0 ? 1.0 : 0.0;
  const double lf = std::log2(f);
  if (k == 0) {
    if (lf <= 0.0) return 1.0;
    if (lf >= 1.0) return 0.0;
    return 0.5 * (1.0 + std::cos(kPi * lf));
  }
  if (k == 6) {
    if (lf <= 5.0) return 0.0;
    if (lf >= 6.0) return 1.0;
    return 0.5 * (1.0 - std::cos(kPi * (lf - 5.0)));
  }
  const double d = lf - k;  // octaves from the band center 2^k
  if (d <= -1.0 || d >= 1.0) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * d));
}

MetricScore nqm_impl(const Image& ref, const Image& test,
                     const MetricConstants& c) {
  constexpr int kBands = 7;
  constexpr double kPeakSensitivity = 150.0;  // 1/contrast at the CSF peak
  const LumaPlane o = to_luminance(ref);
  const LumaPlane i = to_luminance(test);
  const int w = o.width, h = o.height;
  const std::size_t n = o.samples.size();

  const double ppd = c.nqm_viewing_angle_deg > 0.0
                         ? w / c.nqm_viewing_angle_deg
                         : 32.0;

  const Spectrum fo = dft2(o);
  const Spectrum fi = dft2(i);
  auto band_of = [&](const Spectrum& src, int k) {
    Spectrum f = src;
    for (int v = 0; v < h; ++v) {
      const int ky = (v <= h / 2) ? v : v - h;
      const double fy = static_cast<double>(ky) / h;
      for (int u = 0; u < w; ++u) {
        const int kx = (u <= w / 2) ? u : u - w;
        const double fx = static_cast<double>(kx) / w;
        const double cpd = std::sqrt(fx * fx + fy * fy) * ppd;
        f.at(u, v) *= nqm_band_weight(k, cpd);
      }
    }
    return idft2(f);
  };

  std::vector<double> err(n, 0.0);    // visible model error, all bands
  std::vector<double> model(n, 0.0);  // modeled reference (sum of its bands)
  std::vector<double> low_o(n, 0.0);  // cumulative reference lowpass
  for (int k = 0; k < kBands; ++k) {
    const LumaPlane bo = band_of(fo, k);
    const LumaPlane bi = band_of(fi, k);
    if (k == 0) {
      // Mean-luminance band: errors pass through unthresholded.
      for (std::size_t j = 0; j < n; ++j) {
        model[j] += bo.samples[j];
        err[j] += bo.samples[j] - bi.samples[j];
        low_o[j] += bo.samples[j];
      }
      continue;
    }
    const double f_center = std::exp2(k <= 5 ? k : 6);
    const double threshold =
        1.0 / (kPeakSensitivity *
               std::max(csf_mannos_sakrison(f_center), 1e-6));
    for (std::size_t j = 0; j < n; ++j) {
      const double base = std::max(std::abs(low_o[j]), 1.0);
      const double c_o = bo.samples[j] / base;
      const double c_i = bi.samples[j] / base;
      // Contrast masking: suprathreshold reference contrast raises the
      // detection threshold with a compressive power law.
      const double elevation =
          std::pow(std::max(1.0, std::abs(c_o) / threshold), 0.7);
      model[j] += bo.samples[j];
      if (std::abs(c_i - c_o) >= threshold * elevation) {
        err[j] += (c_o - c_i) * base;
      }
      low_o[j] += bo.samples[j];
    }
  }
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    num += model[j] * model[j];
    den += err[j] * err[j];
  }
  if (den == 0.0) return perfect(Metric::kNqm, 0.0, true);
  return finite(Metric::kNqm, 10.0 * std::log10(num / den));
}

// ---------------------------------------------------------------------------
// VSNR: wavelet visual SNR. The luminance error is decomposed with the 9/7
// cascade; per-scale RMS contrasts below the CSF detection threshold are
// treated as invisible, and the visible ones combine perceived-contrast and
// global-precedence (scale-distribution) terms.
// ---------------------------------------------------------------------------

MetricScore vsnr_impl(const Image& ref, const Image& test,
                      const MetricConstants& c) {
  const LumaPlane pr = to_luminance(ref);
  const LumaPlane pt = to_luminance(test);
  const int w = pr.width, h = pr.height;
  const std::size_t n = pr.samples.size();

  // Pixel-to-luminance display model, anchored so code 255 hits the peak.
  const double k =
      (std::pow(c.vsnr_display_peak, 1.0 / c.vsnr_gamma) - c.vsnr_black_level) /
      255.0;
  auto lum = [&](double p) {
    return std::pow(c.vsnr_black_level + k * p, c.vsnr_gamma);
  };

  LumaPlane lr(w, h), err(w, h);
  double mean_l = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    lr.samples[j] = lum(pr.samples[j]);
    err.samples[j] = lum(pt.samples[j]) - lr.samples[j];
    mean_l += lr.samples[j];
  }
  mean_l /= static_cast<double>(n);
  if (mean_l <= 0.0) throw std::invalid_argument("vsnr: black reference image");
  const double contrast_ref = plane_stddev(lr) / mean_l;

  const int max_levels =
      static_cast<int>(std::floor(std::log2(std::min(w, h)))) - 3;
  const int levels = std::clamp(std::min(c.vsnr_levels, max_levels), 1, 8);
  const double ppd = c.vsnr_viewing_distance * h * std::tan(kPi / 180.0);

  std::vector<double> band_contrast(levels, 0.0);
  std::vector<bool> visible(levels, false);
  constexpr double kPeakSensitivity = 150.0;
  LumaPlane low = err;
  for (int m = 0; m < levels; ++m) {
    const Subbands sb = dwt2(low);
    double ss = 0.0;
    std::size_t cnt = 0;
    for (const LumaPlane* band : {&sb.lh, &sb.hl, &sb.hh}) {
      for (double v : band->samples) ss += v * v;
      cnt += band->samples.size();
    }
    band_contrast[m] = cnt ? std::sqrt(ss / cnt) / mean_l : 0.0;
    const double f_m = ppd / std::exp2(m + 1);
    const double threshold =
        1.0 / (kPeakSensitivity * std::max(csf_mannos_sakrison(f_m), 1e-6));
    visible[m] = band_contrast[m] > threshold;
    low = sb.ll;
  }

  std::vector<double> cv(levels, 0.0);
  double d_pc = 0.0;
  for (int m = 0; m < levels; ++m) {
    if (visible[m]) {
      cv[m] = band_contrast[m];
      d_pc += cv[m] * cv[m];
    }
  }
  d_pc = std::sqrt(d_pc);
  if (d_pc <= 0.0) {
    // Below threshold everywhere: charge the raw (imperceptible) contrast so
    // the score stays finite and monotone for non-identical pairs.
    for (int m = 0; m < levels; ++m) d_pc += band_contrast[m] * band_contrast[m];
    d_pc = std::max(std::sqrt(d_pc), 1e-9);
    return finite(Metric::kVsnr, 20.0 * std::log10(contrast_ref / d_pc));
  }

  // Global precedence: the least disruptive distortion concentrates contrast
  // in the coarse scales; measure the distance to that ideal profile.
  double unorm = 0.0;
  for (int m = 0; m < levels; ++m) unorm += std::exp2(2.0 * m);
  unorm = std::sqrt(unorm);
  double d_gp = 0.0;
  for (int m = 0; m < levels; ++m) {
    const double ideal = d_pc * std::exp2(static_cast<double>(m)) / unorm;
    d_gp += (cv[m] - ideal) * (cv[m] - ideal);
  }
  d_gp = std::sqrt(d_gp);

  const double denom =
      c.vsnr_alpha * d_pc + (1.0 - c.vsnr_alpha) * d_gp / std::sqrt(2.0);
  return finite(Metric::kVsnr,
                20.0 * std::log10(contrast_ref / std::max(denom, 1e-9)));
}

// ---------------------------------------------------------------------------
// IFC and wavelet-domain VIF: Gaussian scale mixture statistics over the
// detail subbands of a 4-level 9/7 cascade, 3x3 local estimation blocks.
// ---------------------------------------------------------------------------

struct InfoSums {
  double num = 0.0;  // information shared through the distortion channel
  double den = 0.0;  // information available from the reference
};

InfoSums info_fidelity_sums(const LumaPlane& ref, const LumaPlane& test,
                            double sigma_nsq) {
  constexpr int kLevels = 4;
  constexpr int kBlock = 3;
  InfoSums s;
  LumaPlane lr = ref, lt = test;
  for (int lev = 0; lev < kLevels; ++lev) {
    if (lr.width < 2 * kBlock || lr.height < 2 * kBlock) break;
    const Subbands br = dwt2(lr);
    const Subbands bt = dwt2(lt);
    const LumaPlane* rb[3] = {&br.lh, &br.hl, &br.hh};
    const LumaPlane* tb[3] = {&bt.lh, &bt.hl, &bt.hh};
    for (int b = 0; b < 3; ++b) {
      const LumaPlane& r = *rb[b];
      const LumaPlane& t = *tb[b];
      for (int y = 0; y + kBlock <= r.height; y += kBlock) {
        for (int x = 0; x + kBlock <= r.width; x += kBlock) {
          double mr = 0.0, mt = 0.0;
          for (int dy = 0; dy < kBlock; ++dy) {
            for (int dx = 0; dx < kBlock; ++dx) {
              mr += r.at(x + dx, y + dy);
              mt += t.at(x + dx, y + dy);
            }
          }
          const double inv_n = 1.0 / (kBlock * kBlock);
          mr *= inv_n;
          mt *= inv_n;
          double vr = 0.0, vt = 0.0, cov = 0.0;
          for (int dy = 0; dy < kBlock; ++dy) {
            for (int dx = 0; dx < kBlock; ++dx) {
              const double dr = r.at(x + dx, y + dy) - mr;
              const double dt = t.at(x + dx, y + dy) - mt;
              vr += dr * dr;
              vt += dt * dt;
              cov += dr * dt;
            }
          }
          vr *= inv_n;
          vt *= inv_n;
          cov *= inv_n;
          double g = vr > 1e-10 ? cov / vr : 0.0;
          double sv2 = vt - g * cov;
          if (g < 0.0) {
            g = 0.0;
            sv2 = vt;
          }
          sv2 = std::max(sv2, 1e-10);
          s.num += std::log2(1.0 + g * g * vr / (sv2 + sigma_nsq));
          s.den += std::log2(1.0 + vr / sigma_nsq);
        }
      }
    }
    lr = br.ll;
    lt = bt.ll;
  }
  return s;
}

MetricScore ifc_impl(const Image& ref, const Image& test,
                     const MetricConstants& c) {
  const InfoSums s = info_fidelity_sums(to_luminance(ref), to_luminance(test),
                                        c.ifc_sigma_nsq);
  return finite(Metric::kIfc, s.num);
}

MetricScore vif_impl(const Image& ref, const Image& test,
                     const MetricConstants& c) {
  const InfoSums s = info_fidelity_sums(to_luminance(ref), to_luminance(test),
                                        c.vif_sigma_nsq);
  if (s.den <= 0.0) {
    throw std::invalid_argument("vif: reference carries no subband information");
  }
  return finite(Metric::kVif, s.num / s.den);
}

// ---------------------------------------------------------------------------
// MAD: detection stage (CSF-filtered lightness error, masked by local
// reference activity) combined with an appearance stage (log-Gabor subband
// statistics differences), blended by the detection-driven exponent.
// ---------------------------------------------------------------------------

LumaPlane csf_filtered_lightness(const LumaPlane& p, double ppd) {
  const int w = p.width, h = p.height;
  LumaPlane light(w, h);
  for (std::size_t j = 0; j < p.samples.size(); ++j) {
    // Display-approximate luminance, then cube-root lightness.
    light.samples[j] = std::pow(0.02874 * p.samples[j], 2.2 / 3.0);
  }
  Spectrum f = dft2(light);
  for (int v = 0; v < h; ++v) {
    const int ky = (v <= h / 2) ? v : v - h;
    const double fy = static_cast<double>(ky) / h;
    for (int u = 0; u < w; ++u) {
      const int kx = (u <= w / 2) ? u : u - w;
      const double fx = static_cast<double>(kx) / w;
      const double cpd = std::sqrt(fx * fx + fy * fy) * ppd;
      if (u != 0 || v != 0) f.at(u, v) *= csf_mannos_sakrison(cpd);
    }
  }
  return idft2(f);
}

MetricScore mad_impl(const Image& ref, const Image& test,
                     const MetricConstants& c) {
  constexpr double kPpd = 32.0;
  const LumaPlane pr = to_luminance(ref);
  const LumaPlane pt = to_luminance(test);

  // ---- detection stage ----
  const LumaPlane fr = csf_filtered_lightness(pr, kPpd);
  const LumaPlane ft = csf_filtered_lightness(pt, kPpd);
  LumaPlane derr(fr.width, fr.height);
  for (std::size_t j = 0; j < derr.samples.size(); ++j) {
    derr.samples[j] = ft.samples[j] - fr.samples[j];
  }
  constexpr int kDetBlock = 16;
  constexpr int kDetStride = 4;
  double det_ss = 0.0;
  std::size_t det_n = 0;
  for (int y = 0; y + kDetBlock <= derr.height; y += kDetStride) {
    for (int x = 0; x + kDetBlock <= derr.width; x += kDetStride) {
      const double std_err = block_stats(derr, x, y, kDetBlock).stddev;
      const double std_mask = block_stats(fr, x, y, kDetBlock).stddev;
      // Activity masking: error energy below a twentieth of the local
      // reference activity is treated as hidden.
      const double vis = std::max(0.0, std_err - 0.05 * std_mask);
      det_ss += vis * vis;
      ++det_n;
    }
  }
  double d_detect = det_n ? 200.0 * std::sqrt(det_ss / det_n) : 0.0;

  // ---- appearance stage ----
  LogGaborParams lg;
  lg.nscale = 5;
  lg.norient = 4;
  lg.min_wavelength = 3.0;
  const std::vector<Spectrum> resp_r = log_gabor_responses(pr, lg);
  const std::vector<Spectrum> resp_t = log_gabor_responses(pt, lg);
  const double scale_w[5] = {0.5, 0.75, 1.0, 5.0, 6.0};
  const double w_sum = 13.25;
  constexpr int kAppBlock = 16;
  constexpr int kAppStride = 8;
  const int bw = pr.width, bh = pr.height;
  std::vector<double> eta;
  for (int y = 0; y + kAppBlock <= bh; y += kAppStride) {
    for (int x = 0; x + kAppBlock <= bw; x += kAppStride) {
      eta.push_back(0.0);
    }
  }
  LumaPlane mag_r(bw, bh), mag_t(bw, bh);
  for (int s = 0; s < lg.nscale; ++s) {
    for (int o = 0; o < lg.norient; ++o) {
      const Spectrum& rr = resp_r[static_cast<std::size_t>(s) * lg.norient + o];
      const Spectrum& rt = resp_t[static_cast<std::size_t>(s) * lg.norient + o];
      for (std::size_t j = 0; j < mag_r.samples.size(); ++j) {
        mag_r.samples[j] = std::abs(rr.bins[j]);
        mag_t.samples[j] = std::abs(rt.bins[j]);
      }
      std::size_t bi = 0;
      for (int y = 0; y + kAppBlock <= bh; y += kAppStride) {
        for (int x = 0; x + kAppBlock <= bw; x += kAppStride) {
          const BlockStats a = block_stats(mag_r, x, y, kAppBlock);
          const BlockStats b = block_stats(mag_t, x, y, kAppBlock);
          eta[bi++] += scale_w[s] / w_sum *
                       (std::abs(a.stddev - b.stddev) +
                        2.0 * std::abs(a.skew - b.skew) +
                        std::abs(a.kurt - b.kurt)) /
                       3.0;
        }
      }
    }
  }
  double app_ss = 0.0;
  for (double e : eta) app_ss += e * e;
  double d_appear = eta.empty() ? 0.0 : std::sqrt(app_ss / eta.size());

  d_detect = std::max(d_detect, 1e-12);
  d_appear = std::max(d_appear, 1e-12);
  const double alpha = 1.0 / (1.0 + c.mad_beta1 * std::pow(d_detect, c.mad_beta2));
  const double value =
      std::pow(d_detect, alpha) * std::pow(d_appear, 1.0 - alpha);
  return finite(Metric::kMad, value);
}

}  // namespace

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

MetricScore compute_tier2(Metric m, const Image& ref, const Image& test,
                          const std::set<Metric>& enabled,
                          const MetricConstants& c) {
  const MetricInfo& info = metric_info(m);
  if (info.tier != 2) {
    throw std::invalid_argument(std::string("compute_tier2: ") + info.name +
                                " is not a tier-2 metric");
  }
  if (!enabled.count(m)) {
    throw MetricNotEnabled(info.name);
  }
  if (!ref.same_shape(test)) {
    throw std::invalid_argument("image pair shape mismatch");
  }
  if (ref.samples == test.samples) {
    if (info.snr_type) return perfect(m, 0.0, true);
    if (!info.higher_better) return finite(m, 0.0);  // distortion measure
    return perfect(m, 1.0);
  }
  if (std::min(ref.width, ref.height) < 32) {
    throw std::invalid_argument(std::string(info.name) +
                                ": image must be at least 32x32");
  }
  switch (m) {
    case Metric::kFsim:
    case Metric::kFsimc:
      return fsim_impl(m, ref, test, c);
    case Metric::kVsi:
      return vsi_impl(ref, test, c);
    case Metric::kNqm:
      return nqm_impl(ref, test, c);
    case Metric::kVsnr:
      return vsnr_impl(ref, test, c);
    case Metric::kIfc:
      return ifc_impl(ref, test, c);
    case Metric::kVif:
      return vif_impl(ref, test, c);
    case Metric::kMad:
      return mad_impl(ref, test, c);
    default:
      throw std::invalid_argument("compute_tier2: unhandled metric");
  }
}

}  // namespace ifa
