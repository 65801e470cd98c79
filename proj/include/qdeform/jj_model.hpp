#pragma once

// Current-biased Josephson junction in the unit convention hbar = 1, 2e = 1.
//
// With E_C = 2e^2/C the charging prefactor is 1/(2C) = E_C, the critical
// current is I_J = 2e E_J / hbar = E_J, and the Hamiltonian reads
//   H(t) = E_C (n + I t)^2 - E_J cos(phi).

#include "qdeform/deformation.hpp"
#include "qdeform/repgrid.hpp"

namespace qdeform {

struct JJParams {
  double EJ = 1.0;
  double EC = 1.0;
  double Ibias = 0.0;  // in units of I_J

  // EJ = 0 is allowed as the kinetic-only limit; EC must be positive.
  void validate() const;

  double capacitance() const noexcept { return 1.0 / (2.0 * EC); }
  double critical_current() const noexcept { return EJ; }
  double bias_current() const noexcept { return Ibias * EJ; }
  // Semiclassical regime used to gate expectation-value comparisons.
  bool classical_ok() const noexcept { return EJ / EC >= 20.0; }
};

// Flux Phi through the junction in units where the flux quantum phi0 = 1.
struct FluxMap {
  double Phi = 0.0;
  double phi0 = 1.0;
};

Deformation flux_to_s(const FluxMap& f);

OperatorMatrix build_hamiltonian(const PhaseGrid& grid, const JJParams& p, double t);

// E_C (n + s/2 + I t)^2 - E_J' cos(phi - s/2).
OperatorMatrix build_deformed_hamiltonian(const PhaseGrid& grid, const JJParams& p,
                                          const Deformation& d, double t);

// E_J sin(s/2) / (s/2).
double ej_prime(double EJ, const Deformation& d);

// Supercurrent sinc(s/2) sin(phi - s/2), in units of I_J.
double critical_current(const Deformation& d, double phi);

// Maximum over phi of critical_current: |sinc(s/2)|.
inline double critical_current_max(const Deformation& d) { return std::abs(sinc(0.5 * d.s())); }

}  // namespace qdeform
