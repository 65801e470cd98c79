#pragma once

// Numerical checks of the q-plane relation q^n e^{i phi} = q e^{i phi} q^n and
// of the ladder / dual-basis structure on the finite grid.

#include <vector>

#include "qdeform/deformation.hpp"
#include "qdeform/repgrid.hpp"

namespace qdeform {

// Residuals are max-entry norms of the deviation
//   q^n e^{i phi} - q e^{i phi} q^n
// written in the charge basis, where the only finite-size defect is the wrap
// transition |M/2 - 1> -> |-M/2> with magnitude |exp(-i s M) - 1|.
struct QPlaneReport {
  double s = 0.0;
  int M = 0;
  int K = 0;                       // interior cutoff used for residual_interior
  double residual_full = 0.0;
  double residual_interior = 0.0;
  double wrap_magnitude = 0.0;     // |deviation| on the wrap element
  double wrap_predicted = 0.0;     // |exp(-i s M) - 1|
  double off_wrap_residual = 0.0;  // max |deviation| excluding the wrap element
  bool commensurate = false;       // s M in 2 pi Z within 1e-12
  bool wrap_only = false;          // off_wrap_residual <= 1e-12
};

// K defaults to M/4.
QPlaneReport verify_qplane(const PhaseGrid& grid, const Deformation& d, int K = 0);

struct LadderEntry {
  int n = 0;
  int n_to = 0;
  cplx amplitude;
  bool wrap = false;   // transition across the charge-window edge
  double leakage = 0;  // largest |amplitude| on any other charge state
};

// Action of exp(i direction phi) on every charge state; direction is +1 or -1.
std::vector<LadderEntry> ladder_action_table(const PhaseGrid& grid, int direction = +1);

// |phi_k> = M^{-1/2} sum_n exp(-i n phi_k) |n>, in the grid basis.
std::vector<StateVector> dual_basis(const PhaseGrid& grid);

}  // namespace qdeform
