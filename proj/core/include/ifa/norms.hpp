#ifndef IFA_NORMS_HPP
#define IFA_NORMS_HPP

#include <cstdint>

#include "ifa/image.hpp"

namespace ifa {

/// Number of pixels whose value differs in any channel.
/// When count_samples is set, counts differing samples instead.
std::int64_t l0_norm(const Image& ref, const Image& test, bool count_samples = false);

/// Euclidean norm of the difference over all samples, on the [0,1] scale.
double l2_norm(const Image& ref, const Image& test);

/// Largest absolute per-sample difference, on the [0,1] scale.
double linf_norm(const Image& ref, const Image& test);

}  // namespace ifa

#endif
