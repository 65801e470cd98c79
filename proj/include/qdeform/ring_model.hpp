#pragma once

// Charged particle on a ring threaded by a flux proportional to s:
//   H_s = (L_z + s/2)^2 / (2 M) - V0 cos(phi),  L_z = n (hbar = 1).

#include <vector>

#include "qdeform/repgrid.hpp"

namespace qdeform {

struct RingParams {
  double Minertia = 1.0;
  double V0 = 0.0;
  double s = 0.0;

  void validate() const;
};

OperatorMatrix build_ring_hamiltonian(const PhaseGrid& grid, const RingParams& r);

// (2 L_z + s) / (2 M).
OperatorMatrix ring_rate_phi(const PhaseGrid& grid, const RingParams& r);

struct SpectrumResult {
  std::vector<double> energies;  // lowest k, ascending
  int M_used = 0;                // grid size of the reported values
  double last_change = 0.0;      // max change of the lowest k against M_used / 2
  bool converged = false;
};

inline constexpr double kSpectrumTolerance = 1e-9;
inline constexpr int kSpectrumMaxSize = 1024;

// Lowest k eigenvalues of the grid Hamiltonian. Starting at grid.size(), the
// grid is doubled until the lowest k values move by less than
// kSpectrumTolerance or kSpectrumMaxSize is reached (then converged = false).
SpectrumResult spectrum(const PhaseGrid& grid, const RingParams& r, int k);

// All eigenvalues of the given grid's Hamiltonian, ascending; no refinement.
std::vector<double> grid_spectrum(const PhaseGrid& grid, const RingParams& r);

}  // namespace qdeform
