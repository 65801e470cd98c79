#include "qdeform/fourier.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

namespace qdeform {

struct ChargeTransform::Impl {
  int size;
  double scale;
  std::vector<double> sign;  // (-1)^k, also used as (-1)^(m + M/2) up to a global sign
  double global_sign;        // (-1)^(M/2)
  mutable Eigen::FFT<double> fft;
  mutable std::vector<cplx> in, out;
};

ChargeTransform::ChargeTransform(const PhaseGrid& grid) : impl_(std::make_unique<Impl>()) {
  const int M = grid.size();
  impl_->size = M;
  impl_->scale = 1.0 / std::sqrt(static_cast<double>(M));
  impl_->sign.resize(M);
  for (int k = 0; k < M; ++k) impl_->sign[k] = (k % 2 == 0) ? 1.0 : -1.0;
  impl_->global_sign = ((M / 2) % 2 == 0) ? 1.0 : -1.0;
  impl_->fft.SetFlag(Eigen::FFT<double>::Unscaled);
  impl_->in.resize(M);
  impl_->out.resize(M);
}

ChargeTransform::~ChargeTransform() = default;
ChargeTransform::ChargeTransform(ChargeTransform&&) noexcept = default;
ChargeTransform& ChargeTransform::operator=(ChargeTransform&&) noexcept = default;

// exp(-i n phi_k) = exp(-2 pi i m k / M) (-1)^k (-1)^m (-1)^(M/2), n = m - M/2.
void ChargeTransform::to_charge(const Vector& grid_amps, Vector& charge_amps) const {
  auto& d = *impl_;
  for (int k = 0; k < d.size; ++k) d.in[k] = d.sign[k] * grid_amps[k];
  d.fft.fwd(d.out, d.in);
  charge_amps.resize(d.size);
  const double g = d.global_sign * d.scale;
  for (int m = 0; m < d.size; ++m) charge_amps[m] = g * d.sign[m] * d.out[m];
}

void ChargeTransform::to_grid(const Vector& charge_amps, Vector& grid_amps) const {
  auto& d = *impl_;
  for (int m = 0; m < d.size; ++m) d.in[m] = d.sign[m] * charge_amps[m];
  d.fft.inv(d.out, d.in);
  grid_amps.resize(d.size);
  const double g = d.global_sign * d.scale;
  for (int k = 0; k < d.size; ++k) grid_amps[k] = g * d.sign[k] * d.out[k];
}

}  // namespace qdeform
