#include "qdeform/repgrid.hpp"

#include <cmath>
#include <string>

namespace qdeform {

namespace {

// Circulant matrix with first column c: entry (j, k) = c[(j - k) mod M].
Matrix circulant(const Vector& c) {
  const int M = static_cast<int>(c.size());
  Matrix out(M, M);
  for (int j = 0; j < M; ++j) {
    for (int k = 0; k < M; ++k) {
      out(j, k) = c[((j - k) % M + M) % M];
    }
  }
  return out;
}

// c[d] = (1/M) sum_n f(n) exp(i n 2 pi d / M), the circulant symbol of a
// charge-diagonal operator in the grid basis.
Vector charge_symbol(const PhaseGrid& grid, const std::function<cplx(double)>& f) {
  const int M = grid.size();
  Vector c(M);
  for (int d = 0; d < M; ++d) {
    cplx acc = 0.0;
    for (int m = 0; m < M; ++m) {
      const int n = grid.charge(m);
      // Reduce n*d mod M before forming the angle to keep the phase exact.
      const long long nd = (static_cast<long long>(n) * d % M + M) % M;
      acc += f(n) * std::polar(1.0, 2.0 * kPi * static_cast<double>(nd) / M);
    }
    c[d] = acc / static_cast<double>(M);
  }
  return c;
}

}  // namespace

PhaseGrid::PhaseGrid(int M) : size_(M) {
  if (M % 2 != 0 || M < kMinSize || M > kMaxSize) {
    throw ConfigError("grid size M must be even and in [" + std::to_string(kMinSize) + ", " +
                      std::to_string(kMaxSize) + "], got " + std::to_string(M));
  }
  phi_.resize(M);
  for (int k = 0; k < M; ++k) phi_[k] = 2.0 * kPi * k / M - kPi;

  charge_states_.resize(M, M);
  const double norm = 1.0 / std::sqrt(static_cast<double>(M));
  for (int k = 0; k < M; ++k) {
    for (int m = 0; m < M; ++m) {
      // n phi_k = 2 pi n k / M - n pi; reduce the integer part first.
      const int n = charge(m);
      const long long nk = (static_cast<long long>(n) * k % M + M) % M;
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;  // exp(-i n pi)
      charge_states_(k, m) = sign * std::polar(norm, 2.0 * kPi * static_cast<double>(nk) / M);
    }
  }
}

std::vector<int> PhaseGrid::charge_values() const {
  std::vector<int> out(size_);
  for (int m = 0; m < size_; ++m) out[m] = charge(m);
  return out;
}

PhaseGrid make_grid(int M) { return PhaseGrid(M); }

std::string_view to_string(Role role) {
  switch (role) {
    case Role::hermitian: return "hermitian";
    case Role::unitary: return "unitary";
    case Role::general: return "general";
  }
  return "general";
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const Matrix& m) { return max_abs(m - m.adjoint()); }

double unitarity_residual(const Matrix& m) {
  return max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols()));
}

OperatorMatrix::OperatorMatrix(Matrix entries, Role role)
    : entries_(std::move(entries)), role_(role) {
  if (entries_.rows() != entries_.cols()) {
    throw DimensionError("operator matrix must be square");
  }
  if (role_ == Role::hermitian) {
    const double r = hermiticity_residual(entries_);
    if (!(r <= kRoleTolerance)) {
      throw RoleError("matrix tagged hermitian has |A - A^dagger| = " + std::to_string(r));
    }
  } else if (role_ == Role::unitary) {
    const double r = unitarity_residual(entries_);
    if (!(r <= kRoleTolerance)) {
      throw RoleError("matrix tagged unitary has |A^dagger A - 1| = " + std::to_string(r));
    }
  }
}

OperatorMatrix OperatorMatrix::identity(int dim) {
  return OperatorMatrix(Matrix::Identity(dim, dim), Role::unitary);
}

OperatorMatrix OperatorMatrix::zero(int dim) {
  return OperatorMatrix(Matrix::Zero(dim, dim), Role::hermitian);
}

StateVector::StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  const double n2 = amplitudes_.squaredNorm();
  if (!(std::abs(n2 - 1.0) <= 1e-12)) {
    throw ConfigError("state vector is not normalized: sum |psi|^2 = " + std::to_string(n2));
  }
}

StateVector StateVector::normalized(Vector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ConfigError("cannot normalize a zero state");
  return StateVector(amplitudes / n);
}

OperatorMatrix charge_function_operator(const PhaseGrid& grid,
                                        const std::function<double(double)>& f) {
  const int M = grid.size();
  Vector c = charge_symbol(grid, [&](double n) { return cplx(f(n), 0.0); });
  // A real symbol gives c[-d] = conj(c[d]); impose it so the result is
  // exactly hermitian rather than hermitian up to summation order.
  c[0] = c[0].real();
  for (int d = 1; d < M / 2; ++d) c[M - d] = std::conj(c[d]);
  c[M / 2] = c[M / 2].real();
  return OperatorMatrix(circulant(c), Role::hermitian);
}

OperatorMatrix charge_function_operator(const PhaseGrid& grid,
                                        const std::function<cplx(double)>& f, Role role) {
  return OperatorMatrix(circulant(charge_symbol(grid, f)), role);
}

OperatorMatrix number_operator(const PhaseGrid& grid) {
  return charge_function_operator(grid, [](double n) { return n; });
}

OperatorMatrix phase_function_operator(const PhaseGrid& grid, PhaseFunction f) {
  const int M = grid.size();
  Vector diag(M);
  Role role = Role::hermitian;
  for (int k = 0; k < M; ++k) {
    const double phi = grid.phi(k);
    switch (f.kind) {
      case PhaseFunction::Kind::cos: diag[k] = std::cos(phi - f.shift); break;
      case PhaseFunction::Kind::sin: diag[k] = std::sin(phi - f.shift); break;
      case PhaseFunction::Kind::identity: diag[k] = phi; break;
      case PhaseFunction::Kind::exp_i:
        diag[k] = std::polar(1.0, phi);
        role = Role::unitary;
        break;
      case PhaseFunction::Kind::exp_is:
        diag[k] = std::polar(1.0, f.scale * phi);
        role = Role::unitary;
        break;
    }
  }
  return OperatorMatrix(diag.asDiagonal().toDenseMatrix(), role);
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("commutator of " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + " matrices");
  }
  return a * b - b * a;
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  return OperatorMatrix(commutator(a.entries(), b.entries()), Role::general);
}

OperatorMatrix interior_projector(const PhaseGrid& grid, int K) {
  if (K <= 0 || K >= grid.size() / 2) {
    throw ConfigError("interior cutoff K must satisfy 0 < K < M/2, got K=" + std::to_string(K));
  }
  return charge_function_operator(grid,
                                  [K](double n) { return std::abs(n) <= K ? 1.0 : 0.0; });
}

Matrix project(const OperatorMatrix& projector, const Matrix& a) {
  const Matrix& p = projector.entries();
  if (p.rows() != a.rows()) throw DimensionError("projector and operator dimensions differ");
  return p * a * p;
}

Matrix to_charge_basis(const PhaseGrid& grid, const Matrix& a) {
  const Matrix& u = grid.charge_states();
  if (u.rows() != a.rows()) throw DimensionError("operator does not match grid size");
  return u.adjoint() * a * u;
}

double cut_mass(const PhaseGrid& grid, const Vector& psi) {
  double mass = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    if (std::abs(grid.phi(k)) >= kPi - kPi / 8.0) mass += std::norm(psi[k]);
  }
  return mass;
}

double charge_edge_mass(const PhaseGrid& grid, const Vector& psi) {
  const Vector c = grid.charge_states().adjoint() * psi;
  const int edge = 3 * grid.size() / 8;
  double mass = 0.0;
  for (int m = 0; m < grid.size(); ++m) {
    if (std::abs(grid.charge(m)) >= edge) mass += std::norm(c[m]);
  }
  return mass;
}

StateVector gaussian_wavepacket(const PhaseGrid& grid, double phi0, double n0, double width) {
  if (!(width > 0.0)) throw ConfigError("wavepacket width must be positive");
  if (!(phi0 >= -kPi && phi0 < kPi)) throw ConfigError("phi0 must lie in [-pi, pi)");
  if (kPi - std::abs(phi0) < 3.0 * width) {
    throw ConfigError("wavepacket centre is within 3 widths of the branch cut");
  }
  const int M = grid.size();
  Vector psi(M);
  for (int k = 0; k < M; ++k) {
    const double x = grid.phi(k) - phi0;
    psi[k] = std::polar(std::exp(-x * x / (4.0 * width * width)), n0 * x);
  }
  StateVector state = StateVector::normalized(std::move(psi));
  const double cm = cut_mass(grid, state.amplitudes());
  if (cm > kEdgeMassLimit) {
    throw ConfigError("wavepacket overlaps the branch cut: mass " + std::to_string(cm));
  }
  const double em = charge_edge_mass(grid, state.amplitudes());
  if (em > kEdgeMassLimit) {
    throw ConfigError("wavepacket reaches the charge window edge: mass " + std::to_string(em));
  }
  return state;
}

cplx expectation(const Vector& psi, const Matrix& op) {
  if (op.rows() != psi.size()) throw DimensionError("state and operator dimensions differ");
  return psi.dot(op * psi);  // dot conjugates the left argument
}

cplx expectation(const StateVector& psi, const OperatorMatrix& op) {
  return expectation(psi.amplitudes(), op.entries());
}

}  // namespace qdeform
