/// @file kernel.hpp
/// Smoothed-delta weight used to couple boundary points to the face grid.
///
/// Roma 3-point kernel in cell units: support |r| < 3/2, non-negative,
/// C1 continuous, and a discrete partition of unity over integer shifts,
/// sum_j phi(r - j) = 1 for every r.
#pragma once

#include <cmath>

namespace vfsim {

inline double kernel_weight(double r) {
  const double a = std::abs(r);
  if (a <= 0.5) return (1.0 + std::sqrt(1.0 - 3.0 * r * r)) / 3.0;
  if (a <= 1.5) return (5.0 - 3.0 * a - std::sqrt(1.0 - 3.0 * (1.0 - a) * (1.0 - a))) / 6.0;
  return 0.0;
}

inline double kernel_weight_derivative(double r) {
  const double a = std::abs(r);
  double d;
  if (a <= 0.5) {
    d = -a / std::sqrt(1.0 - 3.0 * a * a);
  } else if (a <= 1.5) {
    d = -0.5 * (1.0 + (1.0 - a) / std::sqrt(1.0 - 3.0 * (1.0 - a) * (1.0 - a)));
  } else {
    return 0.0;
  }
  return r < 0.0 ? -d : d;
}

}  // namespace vfsim
