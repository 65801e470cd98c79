#include "qdeform/qrate.hpp"

#include <cmath>
#include <string>

namespace qdeform {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_hermitian(const OperatorMatrix& m, const char* what) {
  const double r = hermiticity_residual(m.entries());
  if (!(r <= kRoleTolerance)) {
    throw RoleError(std::string(what) + " must be hermitian, |X - X^dagger| = " +
                    std::to_string(r));
  }
}

void require_same_dim(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("operator dimensions differ: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

struct HermitianExp {
  Matrix plus;   // exp(i s A)
  Matrix minus;  // exp(-i s A)
};

HermitianExp hermitian_exp_pair(const Matrix& a, double s) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) throw Error("hermitian eigendecomposition failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  Vector plus(lambda.size());
  for (Eigen::Index j = 0; j < lambda.size(); ++j) plus[j] = std::polar(1.0, s * lambda[j]);
  const Matrix& u = eig.eigenvectors();
  return {u * plus.asDiagonal() * u.adjoint(), u * plus.conjugate().asDiagonal() * u.adjoint()};
}

}  // namespace

Matrix hermitian_exp_i(const Matrix& a, double s) { return hermitian_exp_pair(a, s).plus; }

OperatorMatrix standard_rate(const OperatorMatrix& A, const OperatorMatrix& H) {
  require_same_dim(A, H);
  require_hermitian(H, "Hamiltonian");
  return OperatorMatrix(commutator(A.entries(), H.entries()) / kI, Role::general);
}

OperatorMatrix generalized_rate(const OperatorMatrix& A, const OperatorMatrix& H,
                                const Deformation& d) {
  require_same_dim(A, H);
  require_hermitian(A, "observable");
  require_hermitian(H, "Hamiltonian");
  if (d.classical_limit()) return standard_rate(A, H);

  const double s = d.s();
  const HermitianExp q_a = hermitian_exp_pair(A.entries(), s);
  const cplx ln_q = kI * s;
  const Matrix rate = q_a.minus * commutator(q_a.plus, H.entries()) / (kI * ln_q);
  return OperatorMatrix(rate, Role::general);
}

OperatorMatrix conjugation_form(const OperatorMatrix& A, const OperatorMatrix& H,
                                const Deformation& d) {
  require_same_dim(A, H);
  require_hermitian(A, "observable");
  require_hermitian(H, "Hamiltonian");
  if (d.classical_limit()) {
    throw ConfigError("conjugation_form is undefined at s = 0; use standard_rate");
  }
  const double s = d.s();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(A.entries());
  if (eig.info() != Eigen::Success) throw Error("hermitian eigendecomposition failed");
  const Matrix& u = eig.eigenvectors();
  const Eigen::VectorXd& lambda = eig.eigenvalues();

  // In the eigenbasis of A: (e^{-isA} H e^{isA})_{jk} = H_{jk} e^{is(l_k - l_j)}.
  // (e^{ix} - 1) = 2i sin(x/2) e^{ix/2} avoids cancellation for small x.
  Matrix h = u.adjoint() * H.entries() * u;
  const Eigen::Index n = h.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double x = s * (lambda[k] - lambda[j]);
      const cplx factor = 2.0 * kI * std::sin(0.5 * x) * std::polar(1.0, 0.5 * x) / s;
      h(j, k) *= factor;
    }
  }
  return OperatorMatrix(hermitize(u * h * u.adjoint()), Role::hermitian);
}

OperatorMatrix naive_q_rate(const OperatorMatrix& A, const OperatorMatrix& H,
                            const Deformation& d) {
  require_same_dim(A, H);
  const Matrix& a = A.entries();
  const Matrix& h = H.entries();
  return OperatorMatrix((a * h - d.q() * (h * a)) / kI, Role::general);
}

OperatorMatrix closed_form_rate_phi(const PhaseGrid& grid, const JJParams& p,
                                    const Deformation& d, double t) {
  p.validate();
  const double offset = p.bias_current() * t + 0.5 * d.s();
  const double scale = 2.0 * p.EC;  // 2e / (hbar C)
  return charge_function_operator(grid, [=](double n) { return scale * (n + offset); });
}

OperatorMatrix closed_form_rate_n(const PhaseGrid& grid, const JJParams& p,
                                  const Deformation& d) {
  p.validate();
  const double amplitude = -p.critical_current() * sinc(0.5 * d.s());
  Matrix m = amplitude *
             phase_function_operator(grid, PhaseFunction::sine(0.5 * d.s())).entries();
  return OperatorMatrix(std::move(m), Role::hermitian);
}

std::vector<ResidualRow> closed_form_residuals(const PhaseGrid& grid, int K, const JJParams& p,
                                               const Deformation& d, double t) {
  const OperatorMatrix P = interior_projector(grid, K);
  const OperatorMatrix H = build_hamiltonian(grid, p, t);
  const OperatorMatrix phi = phase_function_operator(grid, PhaseFunction::angle());
  const OperatorMatrix n = number_operator(grid);

  const Matrix d_phi = generalized_rate(phi, H, d).entries();
  const Matrix d_n = generalized_rate(n, H, d).entries();
  const Matrix r_phi = project(P, d_phi - closed_form_rate_phi(grid, p, d, t).entries());
  const Matrix r_n = project(P, d_n - closed_form_rate_n(grid, p, d).entries());

  return {
      {grid.size(), K, d.s(), t, "D_t phi", max_abs(r_phi)},
      {grid.size(), K, d.s(), t, "D_t n", max_abs(r_n)},
  };
}

}  // namespace qdeform
