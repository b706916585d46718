#ifndef IFA_DSP_HPP
#define IFA_DSP_HPP

#include <complex>
#include <vector>

#include "ifa/image.hpp"

namespace ifa {

enum class BorderMode {
  kReflect,  // symmetric reflection, edge sample duplicated (b a | a b c)
  kZero,
};

enum class GradientOperator { kSobel, kScharr, kPrewitt };

/// Complex 2-D spectrum, row-major, unnormalized forward DFT convention.
struct Spectrum {
  int width = 0;
  int height = 0;
  std::vector<std::complex<double>> bins;

  std::complex<double> at(int u, int v) const {
    return bins[static_cast<std::size_t>(v) * width + u];
  }
  std::complex<double>& at(int u, int v) {
    return bins[static_cast<std::size_t>(v) * width + u];
  }
};

/// Same-size 2-D correlation with the given border handling.
/// Kernels here are symmetric in every use; correlation == convolution.
LumaPlane convolve(const LumaPlane& plane, const Kernel2D& k,
                   BorderMode border = BorderMode::kReflect);

/// Valid-region correlation: output is (W-kw+1) x (H-kh+1).
LumaPlane convolve_valid(const LumaPlane& plane, const Kernel2D& k);

/// Normalized 2-D Gaussian taps, size x size, odd size.
Kernel2D gaussian_window(int size, double sigma);

/// Uniform box kernel, weights 1/(size*size).
Kernel2D box_window(int size);

/// 2x2 block average; odd trailing row/column dropped.
LumaPlane downsample2(const LumaPlane& plane);

/// sqrt(Gx^2 + Gy^2) with the named 3x3 operator. Plane must be >= 3x3.
LumaPlane gradient_magnitude(const LumaPlane& plane,
                             GradientOperator op = GradientOperator::kSobel);

/// Unnormalized forward 2-D DFT.
Spectrum dft2(const LumaPlane& plane);

/// Inverse of dft2 (applies the 1/(W*H) factor); imaginary parts dropped.
LumaPlane idft2(const Spectrum& spec);

/// Complex-to-complex transforms for filterbank work.
Spectrum dft2(const Spectrum& in);
Spectrum idft2_complex(const Spectrum& in);

double plane_mean(const LumaPlane& p);
double plane_stddev(const LumaPlane& p);  // population (divide by n)

}  // namespace ifa

#endif
