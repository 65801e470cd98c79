#pragma once

#include <cmath>
#include <complex>

#include "qdeform/errors.hpp"

namespace qdeform {

// Real deformation parameter s with q = exp(i s) on the unit circle.
class Deformation {
 public:
  constexpr Deformation() = default;
  explicit Deformation(double s) : s_(s) {
    if (!std::isfinite(s)) throw ConfigError("deformation s must be finite");
  }

  double s() const noexcept { return s_; }
  std::complex<double> q() const noexcept { return std::polar(1.0, s_); }
  // s = 0 is allowed and means q = 1, the undeformed Heisenberg dynamics.
  bool classical_limit() const noexcept { return s_ == 0.0; }

 private:
  double s_ = 0.0;
};

// sin(x)/x with sinc(0) = 1.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

}  // namespace qdeform
