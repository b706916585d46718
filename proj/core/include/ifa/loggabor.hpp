#ifndef IFA_LOGGABOR_HPP
#define IFA_LOGGABOR_HPP

#include <vector>

#include "ifa/dsp.hpp"
#include "ifa/image.hpp"

namespace ifa {

/// Multi-scale, multi-orientation log-Gabor filterbank evaluated in the
/// frequency domain. Filters are real and even; responses are complex
/// (even-symmetric real part, odd-symmetric imaginary part).
struct LogGaborParams {
  int nscale = 4;
  int norient = 4;
  double min_wavelength = 6.0;
  double mult = 2.0;           // scale factor between successive wavelengths
  double sigma_onf = 0.55;     // log-domain radial bandwidth
  double d_theta_on_sigma = 1.2;
  double noise_k = 2.0;        // noise-threshold std multiplier
  double epsilon = 1e-4;
};

/// Complex spatial responses, indexed [scale * norient + orient].
std::vector<Spectrum> log_gabor_responses(const LumaPlane& plane,
                                          const LogGaborParams& p);

/// Phase congruency map (orientation-summed energy over summed amplitude,
/// noise-compensated), values in [0, 1].
LumaPlane phase_congruency(const LumaPlane& plane, const LogGaborParams& p = {});

/// Single radial log-Gabor transfer function sampled on the DFT grid of a
/// w x h plane; omega0 is the normalized center frequency, sigma_f the
/// log-domain bandwidth. DC is zero. Used by the saliency frequency prior.
std::vector<double> radial_log_gabor(int w, int h, double omega0, double sigma_f);

}  // namespace ifa

#endif
