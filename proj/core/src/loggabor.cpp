#include "ifa/loggabor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ifa {

namespace {

// Normalized frequency of DFT bin i along an axis of n samples
// (cycles/sample, wrapped to [-0.5, 0.5)).
double freq_coord(int i, int n) {
  const int half = n / 2;
  const int k = (i < n - half) ? i : i - n;
  return static_cast<double>(k) / n;
}

// Butterworth-style lowpass on the normalized radius: kills the corner
// frequencies beyond Nyquist that the radial log-Gabor tail would otherwise
// pick up.
double lowpass(double r) { return 1.0 / (1.0 + std::pow(r / 0.45, 30.0)); }

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lo = *std::max_element(v.begin(), v.begin() + mid);
    m = 0.5 * (m + lo);
  }
  return m;
}

struct FreqGrid {
  std::vector<double> radius;  // normalized radial frequency, DC forced to 1
  std::vector<double> sin_t;   // sin/cos of the frequency angle
  std::vector<double> cos_t;
};

FreqGrid make_grid(int w, int h) {
  FreqGrid g;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  g.radius.resize(n);
  g.sin_t.resize(n);
  g.cos_t.resize(n);
  for (int v = 0; v < h; ++v) {
    const double fy = freq_coord(v, h);
    for (int u = 0; u < w; ++u) {
      const double fx = freq_coord(u, w);
      const std::size_t i = static_cast<std::size_t>(v) * w + u;
      double r = std::sqrt(fx * fx + fy * fy);
      const double theta = std::atan2(-fy, fx);
      if (u == 0 && v == 0) r = 1.0;  // avoid log(0); the filter zeroes DC anyway
      g.radius[i] = r;
      g.sin_t[i] = std::sin(theta);
      g.cos_t[i] = std::cos(theta);
    }
  }
  return g;
}

std::vector<double> angular_spread(const FreqGrid& g, int orient, int norient,
                                   double d_theta_on_sigma) {
  const double angl = orient * M_PI / norient;
  const double theta_sigma = M_PI / norient / d_theta_on_sigma;
  const double ca = std::cos(angl);
  const double sa = std::sin(angl);
  std::vector<double> spread(g.radius.size());
  for (std::size_t i = 0; i < spread.size(); ++i) {
    // angular distance, computed via sin/cos differences so it wraps correctly
    const double ds = g.sin_t[i] * ca - g.cos_t[i] * sa;
    const double dc = g.cos_t[i] * ca + g.sin_t[i] * sa;
    const double dtheta = std::abs(std::atan2(ds, dc));
    spread[i] = std::exp(-(dtheta * dtheta) / (2.0 * theta_sigma * theta_sigma));
  }
  return spread;
}

std::vector<double> radial_filter(const FreqGrid& g, int w, int h, double f0,
                                  double sigma_onf) {
  const double log_sigma = std::log(sigma_onf);
  const double denom = 2.0 * log_sigma * log_sigma;
  std::vector<double> filt(g.radius.size());
  for (std::size_t i = 0; i < filt.size(); ++i) {
    const double lr = std::log(g.radius[i] / f0);
    filt[i] = std::exp(-(lr * lr) / denom) * lowpass(g.radius[i]);
  }
  filt[0] = 0.0;  // zero DC
  (void)w;
  (void)h;
  return filt;
}

}  // namespace

std::vector<double> radial_log_gabor(int w, int h, double omega0, double sigma_f) {
  const FreqGrid g = make_grid(w, h);
  const double denom = 2.0 * sigma_f * sigma_f;
  std::vector<double> filt(g.radius.size());
  for (std::size_t i = 0; i < filt.size(); ++i) {
    const double lr = std::log(g.radius[i] / omega0);
    filt[i] = std::exp(-(lr * lr) / denom);
  }
  filt[0] = 0.0;
  return filt;
}

std::vector<Spectrum> log_gabor_responses(const LumaPlane& plane,
                                          const LogGaborParams& p) {
  if (plane.width < 8 || plane.height < 8) {
    throw std::invalid_argument("log_gabor_responses: plane must be at least 8x8");
  }
  const int w = plane.width;
  const int h = plane.height;
  const FreqGrid g = make_grid(w, h);
  const Spectrum F = dft2(plane);

  std::vector<std::vector<double>> radial(p.nscale);
  for (int s = 0; s < p.nscale; ++s) {
    const double wavelength = p.min_wavelength * std::pow(p.mult, s);
    radial[s] = radial_filter(g, w, h, 1.0 / wavelength, p.sigma_onf);
  }

  std::vector<Spectrum> out;
  out.reserve(static_cast<std::size_t>(p.nscale) * p.norient);
  for (int s = 0; s < p.nscale; ++s) {
    for (int o = 0; o < p.norient; ++o) {
      const std::vector<double> spread =
          angular_spread(g, o, p.norient, p.d_theta_on_sigma);
      Spectrum filtered;
      filtered.width = w;
      filtered.height = h;
      filtered.bins.resize(F.bins.size());
      for (std::size_t i = 0; i < F.bins.size(); ++i) {
        filtered.bins[i] = F.bins[i] * (radial[s][i] * spread[i]);
      }
      out.push_back(idft2_complex(filtered));
    }
  }
  return out;
}

LumaPlane phase_congruency(const LumaPlane& plane, const LogGaborParams& p) {
  if (plane.width < 8 || plane.height < 8) {
    throw std::invalid_argument("phase_congruency: plane must be at least 8x8");
  }
  const int w = plane.width;
  const int h = plane.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const FreqGrid g = make_grid(w, h);
  const Spectrum F = dft2(plane);

  std::vector<std::vector<double>> radial(p.nscale);
  for (int s = 0; s < p.nscale; ++s) {
    const double wavelength = p.min_wavelength * std::pow(p.mult, s);
    radial[s] = radial_filter(g, w, h, 1.0 / wavelength, p.sigma_onf);
  }

  std::vector<double> energy_all(n, 0.0);
  std::vector<double> an_all(n, 0.0);

  for (int o = 0; o < p.norient; ++o) {
    const std::vector<double> spread =
        angular_spread(g, o, p.norient, p.d_theta_on_sigma);

    // Per-scale quadrature responses for this orientation.
    std::vector<std::vector<double>> e(p.nscale), od(p.nscale);
    std::vector<double> sum_e(n, 0.0), sum_o(n, 0.0), sum_an(n, 0.0);
    double tau = 0.0;  // noise scale estimate from the finest filter
    for (int s = 0; s < p.nscale; ++s) {
      Spectrum filtered;
      filtered.width = w;
      filtered.height = h;
      filtered.bins.resize(F.bins.size());
      for (std::size_t i = 0; i < n; ++i) {
        filtered.bins[i] = F.bins[i] * (radial[s][i] * spread[i]);
      }
      const Spectrum eo = idft2_complex(filtered);
      e[s].resize(n);
      od[s].resize(n);
      std::vector<double> an(n);
      for (std::size_t i = 0; i < n; ++i) {
        e[s][i] = eo.bins[i].real();
        od[s][i] = eo.bins[i].imag();
        an[i] = std::abs(eo.bins[i]);
        sum_e[i] += e[s][i];
        sum_o[i] += od[s][i];
        sum_an[i] += an[i];
      }
      if (s == 0) {
        // Rayleigh scale of the amplitude response under white noise.
        tau = median_of(an) / std::sqrt(std::log(4.0));
      }
    }

    std::vector<double> energy(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double x_energy =
          std::sqrt(sum_e[i] * sum_e[i] + sum_o[i] * sum_o[i]) + p.epsilon;
      const double mean_e = sum_e[i] / x_energy;
      const double mean_o = sum_o[i] / x_energy;
      for (int s = 0; s < p.nscale; ++s) {
        energy[i] += e[s][i] * mean_e + od[s][i] * mean_o -
                     std::abs(e[s][i] * mean_o - od[s][i] * mean_e);
      }
    }

    // Noise compensation: expected energy of pure noise plus k standard
    // deviations, scaled across the geometric filter series.
    const double total_tau =
        tau * (1.0 - std::pow(1.0 / p.mult, p.nscale)) / (1.0 - 1.0 / p.mult);
    const double noise_mean = total_tau * std::sqrt(M_PI / 2.0);
    const double noise_sigma = total_tau * std::sqrt((4.0 - M_PI) / 2.0);
    const double threshold = (noise_mean + p.noise_k * noise_sigma) / 1.7;

    for (std::size_t i = 0; i < n; ++i) {
      energy_all[i] += std::max(energy[i] - threshold, 0.0);
      an_all[i] += sum_an[i];
    }
  }

  LumaPlane pc(w, h);
  for (std::size_t i = 0; i < n; ++i) {
    pc.samples[i] = std::clamp(energy_all[i] / (an_all[i] + p.epsilon), 0.0, 1.0);
  }
  return pc;
}

}  // namespace ifa
