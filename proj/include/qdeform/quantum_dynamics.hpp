#pragma once

// Wavefunction propagation under the time-dependent junction Hamiltonian
//   H(t) = E_C (n + I t)^2 - E_J cos(phi)
// with a second-order split-step scheme, plus checks of the Heisenberg
// equation for q^n and of the classical (Ehrenfest) limit.

#include <vector>

#include "qdeform/deformation.hpp"
#include "qdeform/jj_model.hpp"
#include "qdeform/repgrid.hpp"

namespace qdeform {

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> exp_n;
  std::vector<double> exp_phi;
  std::vector<double> exp_sinphi;
  std::vector<double> exp_cosphi;
  std::vector<cplx> exp_qn;  // <q^n> with q = exp(i s)
  std::vector<double> norm;
  StateVector final_state;
};

struct PropagateOptions {
  Deformation deformation{};  // only used for the <q^n> series
  int stride = 1;             // sample every `stride` steps (and at T)
  double norm_limit = 1e-8;   // abort once |norm - 1| exceeds this
  bool monitor_cut = false;   // abort once cut_mass exceeds cut_limit
  double cut_limit = kEdgeMassLimit;
};

// Each step: kinetic half step exp(-i dt/2 E_C (n + I t_mid)^2) in the charge
// basis, potential step exp(+i dt E_J cos phi) on the grid, kinetic half step.
// Requires dt * ||H||_bound <= 0.5 over [0, T].
EvolutionTrace propagate(const StateVector& psi0, const PhaseGrid& grid, const JJParams& p,
                         double T, double dt, const PropagateOptions& opts = {});

// Bound on ||H(t)|| used by the step-size check: E_C max_n (|n| + |I| t)^2 + E_J.
double hamiltonian_norm_bound(const PhaseGrid& grid, const JJParams& p, double t);

// Max over interior samples of |centered FD of <q^n> - <[q^n, H(t)]> / i|.
double verify_inner_heisenberg(const StateVector& psi0, const PhaseGrid& grid,
                               const JJParams& p, const Deformation& d, double T, double dt);

// Small-oscillation frequency about the tilted minimum,
// sqrt(2 E_C I_J cos(phi_min)).
double plasma_frequency(const JJParams& p);

// Harmonic ground-state width of phi at the tilted minimum,
// (E_C / (2 E_J cos(phi_min)))^{1/4}.
double harmonic_width(const JJParams& p);

// Tail mass near the cut tolerated by ehrenfest_compare; it moves <phi> by at
// most 2 pi times this.
inline constexpr double kEhrenfestCutLimit = 1e-6;

struct EhrenfestReport {
  double max_discrepancy = 0.0;  // max_t |<phi>_quantum - phi_classical|
  std::vector<double> times;
  std::vector<double> quantum_phi;
  std::vector<double> classical_phi;
};

// Propagates psi0 and the classical washboard from (<phi>, 2 E_C <n>).
// Requires p.classical_ok(); aborts with IntegrationError if the packet
// reaches the branch cut.
EhrenfestReport ehrenfest_compare(const StateVector& psi0, const PhaseGrid& grid,
                                  const JJParams& p, double T, double dt);

}  // namespace qdeform
