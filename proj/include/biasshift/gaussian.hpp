#pragma once

#include <cmath>
#include <numbers>

namespace biasshift {

struct GaussianComponent {
  double weight = 1.0;
  double mean = 0.0;
  double stddev = 1.0;
};

inline double standard_normal_pdf(double z) noexcept {
  constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1 / sqrt(2 pi)
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

// Phi(z) through erfc so the lower tail keeps full relative precision.
inline double standard_normal_cdf(double z) noexcept {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// 1 - Phi(z), accurate in the upper tail.
inline double standard_normal_sf(double z) noexcept {
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

// Phi(b) - Phi(a) for a <= b, evaluated on whichever tail avoids
// cancellation.
inline double standard_normal_mass(double a, double b) noexcept {
  if (a > 0.0) return standard_normal_sf(a) - standard_normal_sf(b);
  return standard_normal_cdf(b) - standard_normal_cdf(a);
}

inline double normal_pdf(double x, double mean, double stddev) noexcept {
  return standard_normal_pdf((x - mean) / stddev) / stddev;
}

inline double normal_cdf(double x, double mean, double stddev) noexcept {
  return standard_normal_cdf((x - mean) / stddev);
}

}  // namespace biasshift
