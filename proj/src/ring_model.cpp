#include "qdeform/ring_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qdeform {

void RingParams::validate() const {
  if (!(Minertia > 0.0) || !std::isfinite(Minertia)) {
    throw ConfigError("moment of inertia must be positive");
  }
  if (!(V0 >= 0.0) || !std::isfinite(V0)) throw ConfigError("V0 must be non-negative");
  if (!std::isfinite(s)) throw ConfigError("s must be finite");
}

OperatorMatrix build_ring_hamiltonian(const PhaseGrid& grid, const RingParams& r) {
  r.validate();
  const double shift = 0.5 * r.s;
  const double inv_2m = 1.0 / (2.0 * r.Minertia);
  Matrix h = charge_function_operator(grid, [=](double n) {
               const double x = n + shift;
               return inv_2m * x * x;
             }).entries();
  if (r.V0 != 0.0) {
    h -= r.V0 * phase_function_operator(grid, PhaseFunction::cosine()).entries();
  }
  return OperatorMatrix(std::move(h), Role::hermitian);
}

OperatorMatrix ring_rate_phi(const PhaseGrid& grid, const RingParams& r) {
  r.validate();
  const double s = r.s;
  const double inv_2m = 1.0 / (2.0 * r.Minertia);
  return charge_function_operator(grid, [=](double n) { return inv_2m * (2.0 * n + s); });
}

std::vector<double> grid_spectrum(const PhaseGrid& grid, const RingParams& r) {
  const OperatorMatrix h = build_ring_hamiltonian(grid, r);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h.entries(), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error("ring Hamiltonian diagonalization failed");
  const Eigen::VectorXd& e = eig.eigenvalues();
  return {e.data(), e.data() + e.size()};
}

SpectrumResult spectrum(const PhaseGrid& grid, const RingParams& r, int k) {
  if (k < 1 || k > grid.size()) {
    throw ConfigError("level count k must be in [1, M], got " + std::to_string(k));
  }
  SpectrumResult out;
  std::vector<double> previous = grid_spectrum(grid, r);
  previous.resize(static_cast<std::size_t>(k));
  int M = grid.size();
  while (2 * M <= std::min(kSpectrumMaxSize, PhaseGrid::kMaxSize)) {
    M *= 2;
    std::vector<double> current = grid_spectrum(PhaseGrid(M), r);
    current.resize(static_cast<std::size_t>(k));
    double change = 0.0;
    for (int i = 0; i < k; ++i) change = std::max(change, std::abs(current[i] - previous[i]));
    out.energies = current;
    out.M_used = M;
    out.last_change = change;
    if (change < kSpectrumTolerance) {
      out.converged = true;
      return out;
    }
    previous = std::move(current);
  }
  if (out.energies.empty()) {
    out.energies = previous;
    out.M_used = M;
  }
  return out;
}

}  // namespace qdeform
