#include "qdeform/qalgebra.hpp"

#include <cmath>
#include <string>

namespace qdeform {

QPlaneReport verify_qplane(const PhaseGrid& grid, const Deformation& d, int K) {
  const int M = grid.size();
  if (K == 0) K = M / 4;
  if (K <= 0 || K >= M / 2) throw ConfigError("interior cutoff K must satisfy 0 < K < M/2");

  const double s = d.s();
  const cplx q = d.q();
  // q^n is the identity at q = 1; build it exactly so the relation holds exactly.
  const Matrix q_n =
      d.classical_limit()
          ? Matrix(Matrix::Identity(M, M))
          : charge_function_operator(grid, [s](double n) { return std::polar(1.0, s * n); },
                                     Role::unitary)
                .entries();
  const Matrix shift = phase_function_operator(grid, PhaseFunction::exp_i()).entries();
  const Matrix deviation = to_charge_basis(grid, q_n * shift - q * (shift * q_n));

  QPlaneReport r;
  r.s = s;
  r.M = M;
  r.K = K;
  r.residual_full = max_abs(deviation);

  const int lo = grid.charge_index(-K);
  const int width = 2 * K + 1;
  r.residual_interior = max_abs(deviation.block(lo, lo, width, width));

  // Wrap element: row n' = -M/2 (index 0), column n = M/2 - 1 (index M - 1).
  r.wrap_magnitude = std::abs(deviation(0, M - 1));
  r.wrap_predicted = std::abs(std::polar(1.0, -s * M) - 1.0);
  Matrix off = deviation;
  off(0, M - 1) = 0.0;
  r.off_wrap_residual = max_abs(off);
  r.wrap_only = r.off_wrap_residual <= 1e-12;

  const double turns = s * M / (2.0 * kPi);
  r.commensurate = std::abs(turns - std::round(turns)) * 2.0 * kPi <= 1e-12;
  return r;
}

std::vector<LadderEntry> ladder_action_table(const PhaseGrid& grid, int direction) {
  if (direction != 1 && direction != -1) throw ConfigError("ladder direction must be +1 or -1");
  const int M = grid.size();
  const Matrix shift = phase_function_operator(grid, direction > 0 ? PhaseFunction::exp_i()
                                                                   : PhaseFunction::exp_is(-1.0))
                           .entries();
  const Matrix in_charge = to_charge_basis(grid, shift);

  std::vector<LadderEntry> table;
  table.reserve(M);
  for (int m = 0; m < M; ++m) {
    const auto column = in_charge.col(m);
    Eigen::Index best = 0;
    column.cwiseAbs().maxCoeff(&best);
    LadderEntry e;
    e.n = grid.charge(m);
    e.n_to = grid.charge(static_cast<int>(best));
    e.amplitude = column[best];
    e.wrap = e.n_to != e.n + direction;
    for (int j = 0; j < M; ++j) {
      if (j != best) e.leakage = std::max(e.leakage, std::abs(column[j]));
    }
    table.push_back(e);
  }
  return table;
}

std::vector<StateVector> dual_basis(const PhaseGrid& grid) {
  const int M = grid.size();
  const Matrix& charge_states = grid.charge_states();
  const double norm = 1.0 / std::sqrt(static_cast<double>(M));
  std::vector<StateVector> basis;
  basis.reserve(M);
  for (int k = 0; k < M; ++k) {
    Vector v = Vector::Zero(M);
    for (int m = 0; m < M; ++m) {
      v += std::polar(norm, -grid.charge(m) * grid.phi(k)) * charge_states.col(m);
    }
    basis.push_back(StateVector(std::move(v)));
  }
  return basis;
}

}  // namespace qdeform
