#pragma once

// Periodic phase-grid representation of the conjugate pair (n, phi).
//
// Everything is stored in the grid basis |phi_k>, phi_k = 2 pi k / M - pi.
// The charge basis |n>, n in {-M/2, ..., M/2 - 1}, is its exact discrete
// Fourier dual: <phi_k|n> = exp(i n phi_k) / sqrt(M). Functions of phi are
// diagonal in the grid basis, functions of n are diagonal in the charge basis.

#include <complex>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qdeform/errors.hpp"

namespace qdeform {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kRoleTolerance = 1e-12;

class PhaseGrid {
 public:
  static constexpr int kMinSize = 8;
  static constexpr int kMaxSize = 4096;

  // Throws ConfigError unless M is even and within [kMinSize, kMaxSize].
  explicit PhaseGrid(int M);

  int size() const noexcept { return size_; }
  double step() const noexcept { return 2.0 * kPi / size_; }
  double phi(int k) const noexcept { return phi_[k]; }
  // Charge label of charge-basis index m (m = 0 is n = -M/2).
  int charge(int m) const noexcept { return m - size_ / 2; }
  int charge_index(int n) const noexcept { return n + size_ / 2; }
  int min_charge() const noexcept { return -size_ / 2; }
  int max_charge() const noexcept { return size_ / 2 - 1; }

  std::span<const double> phi_points() const noexcept { return phi_; }
  std::vector<int> charge_values() const;

  // Columns are the charge eigenstates |n> written in the grid basis.
  const Matrix& charge_states() const noexcept { return charge_states_; }

 private:
  int size_;
  std::vector<double> phi_;
  Matrix charge_states_;
};

PhaseGrid make_grid(int M);

enum class Role { hermitian, unitary, general };

std::string_view to_string(Role role);

// Dense operator in the grid basis with a checked role tag.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  // Throws RoleError if the entries violate the role at kRoleTolerance.
  OperatorMatrix(Matrix entries, Role role);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  Role role() const noexcept { return role_; }
  const Matrix& entries() const noexcept { return entries_; }
  cplx operator()(int r, int c) const { return entries_(r, c); }

  static OperatorMatrix identity(int dim);
  static OperatorMatrix zero(int dim);

 private:
  Matrix entries_;
  Role role_ = Role::general;
};

// Normalized amplitude vector in the grid basis.
class StateVector {
 public:
  StateVector() = default;
  // Throws ConfigError if the norm differs from 1 by more than 1e-12.
  explicit StateVector(Vector amplitudes);
  // Normalizes first; throws on a zero vector.
  static StateVector normalized(Vector amplitudes);

  int dim() const noexcept { return static_cast<int>(amplitudes_.size()); }
  const Vector& amplitudes() const noexcept { return amplitudes_; }

 private:
  Vector amplitudes_;
};

// Max absolute entry, the norm used by every residual in the project.
double max_abs(const Matrix& m);
double hermiticity_residual(const Matrix& m);
double unitarity_residual(const Matrix& m);

OperatorMatrix number_operator(const PhaseGrid& grid);

// U diag(f(n)) U^dagger for a real function of the charge label.
OperatorMatrix charge_function_operator(const PhaseGrid& grid,
                                        const std::function<double(double)>& f);
// Same for complex values; role is unitary when |f| = 1 everywhere.
OperatorMatrix charge_function_operator(const PhaseGrid& grid,
                                        const std::function<cplx(double)>& f,
                                        Role role);

struct PhaseFunction {
  enum class Kind { cos, sin, exp_i, exp_is, identity };
  Kind kind = Kind::identity;
  double scale = 1.0;  // s in exp(i s phi)
  double shift = 0.0;  // cos(phi - shift), sin(phi - shift)

  static PhaseFunction cosine(double shift = 0.0) { return {Kind::cos, 1.0, shift}; }
  static PhaseFunction sine(double shift = 0.0) { return {Kind::sin, 1.0, shift}; }
  static PhaseFunction exp_i() { return {Kind::exp_i, 1.0, 0.0}; }
  static PhaseFunction exp_is(double s) { return {Kind::exp_is, s, 0.0}; }
  static PhaseFunction angle() { return {Kind::identity, 1.0, 0.0}; }
};

OperatorMatrix phase_function_operator(const PhaseGrid& grid, PhaseFunction f);

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);
Matrix commutator(const Matrix& a, const Matrix& b);

// Orthogonal projector onto the charge states with |n| <= K, 0 < K < M/2.
OperatorMatrix interior_projector(const PhaseGrid& grid, int K);

// A sandwiched by P: P A P.
Matrix project(const OperatorMatrix& projector, const Matrix& a);

// U^dagger A U: the operator in the charge basis, rows/cols by charge index.
Matrix to_charge_basis(const PhaseGrid& grid, const Matrix& a);

// exp(-(phi - phi0)^2 / (4 width^2) + i n0 (phi - phi0)), normalized on the
// grid. width is the standard deviation of |psi|^2 in phi.
//
// Throws ConfigError when phi0 is closer than 3 width to the cut, when more
// than kEdgeMassLimit of the probability sits within pi/8 of the cut, or when
// more than kEdgeMassLimit sits in the outer charge band |n| >= 3M/8.
StateVector gaussian_wavepacket(const PhaseGrid& grid, double phi0, double n0, double width);

inline constexpr double kEdgeMassLimit = 1e-8;
double cut_mass(const PhaseGrid& grid, const Vector& psi);
double charge_edge_mass(const PhaseGrid& grid, const Vector& psi);

cplx expectation(const StateVector& psi, const OperatorMatrix& op);
cplx expectation(const Vector& psi, const Matrix& op);

}  // namespace qdeform
