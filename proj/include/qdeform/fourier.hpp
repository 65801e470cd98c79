#pragma once

#include <memory>

#include "qdeform/repgrid.hpp"

namespace qdeform {

// Fast transform between grid amplitudes psi_k and charge amplitudes c_n
// (index m = n + M/2), matching the unitary basis change of PhaseGrid:
//   c_n = M^{-1/2} sum_k exp(-i n phi_k) psi_k.
class ChargeTransform {
 public:
  explicit ChargeTransform(const PhaseGrid& grid);
  ~ChargeTransform();
  ChargeTransform(ChargeTransform&&) noexcept;
  ChargeTransform& operator=(ChargeTransform&&) noexcept;

  void to_charge(const Vector& grid_amps, Vector& charge_amps) const;
  void to_grid(const Vector& charge_amps, Vector& grid_amps) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qdeform
