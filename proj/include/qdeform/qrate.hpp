#pragma once

// Rates of change of observables with hbar = 1. The generalized rate is
// D_t A = q^{-A} [q^A, H] / (i ln q) with q = exp(i s). The naive
// q-commutator rate is kept for contrast.

#include <ostream>
#include <string>
#include <vector>

#include "qdeform/deformation.hpp"
#include "qdeform/jj_model.hpp"
#include "qdeform/repgrid.hpp"

namespace qdeform {

// exp(i s A) for hermitian A via A = U diag(lambda) U^dagger.
Matrix hermitian_exp_i(const Matrix& a, double s);

// [A, H] / i.
OperatorMatrix standard_rate(const OperatorMatrix& A, const OperatorMatrix& H);

// q^{-A} [q^A, H] / (i ln q), ln q = i s. Falls back to standard_rate at s = 0.
// Throws RoleError if A or H is not hermitian.
OperatorMatrix generalized_rate(const OperatorMatrix& A, const OperatorMatrix& H,
                                const Deformation& d);

// (exp(-i s A) H exp(i s A) - H) / s, evaluated entrywise in the eigenbasis
// of A. Same operator as generalized_rate, hermitian by construction.
// Throws ConfigError at s = 0.
OperatorMatrix conjugation_form(const OperatorMatrix& A, const OperatorMatrix& H,
                                const Deformation& d);

// (AH - q HA) / i.
OperatorMatrix naive_q_rate(const OperatorMatrix& A, const OperatorMatrix& H,
                            const Deformation& d);

// Right-hand side for D_t phi: 2 E_C (n + I t + s/2).
OperatorMatrix closed_form_rate_phi(const PhaseGrid& grid, const JJParams& p,
                                    const Deformation& d, double t);

// Right-hand side for D_t n: -E_J sinc(s/2) sin(phi - s/2).
OperatorMatrix closed_form_rate_n(const PhaseGrid& grid, const JJParams& p,
                                  const Deformation& d);

struct ResidualRow {
  int M = 0;
  int K = 0;
  double s = 0.0;
  double t = 0.0;
  std::string observable;
  double residual_max = 0.0;
};

// Interior-projected residuals of the closed forms against generalized_rate
// at one (s, t): observables "D_t phi" and "D_t n".
std::vector<ResidualRow> closed_form_residuals(const PhaseGrid& grid, int K, const JJParams& p,
                                               const Deformation& d, double t);

}  // namespace qdeform
