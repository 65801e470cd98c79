#include "qdeform/jj_model.hpp"

#include <cmath>

namespace qdeform {

void JJParams::validate() const {
  if (!(EJ >= 0.0) || !std::isfinite(EJ)) throw ConfigError("EJ must be non-negative");
  if (!(EC > 0.0) || !std::isfinite(EC)) throw ConfigError("EC must be positive");
  if (!std::isfinite(Ibias)) throw ConfigError("Ibias must be finite");
}

Deformation flux_to_s(const FluxMap& f) {
  if (!(f.phi0 > 0.0)) throw ConfigError("flux quantum must be positive");
  return Deformation(2.0 * kPi * f.Phi / f.phi0);
}

double ej_prime(double EJ, const Deformation& d) { return EJ * sinc(0.5 * d.s()); }

double critical_current(const Deformation& d, double phi) {
  const double s = d.s();
  return sinc(0.5 * s) * std::sin(phi - 0.5 * s);
}

OperatorMatrix build_hamiltonian(const PhaseGrid& grid, const JJParams& p, double t) {
  p.validate();
  const double offset = p.bias_current() * t;
  const double EC = p.EC;
  Matrix h = charge_function_operator(grid, [=](double n) {
               const double x = n + offset;
               return EC * x * x;
             }).entries();
  h -= p.EJ * phase_function_operator(grid, PhaseFunction::cosine()).entries();
  return OperatorMatrix(std::move(h), Role::hermitian);
}

OperatorMatrix build_deformed_hamiltonian(const PhaseGrid& grid, const JJParams& p,
                                          const Deformation& d, double t) {
  p.validate();
  const double half_s = 0.5 * d.s();
  const double offset = half_s + p.bias_current() * t;
  const double EC = p.EC;
  Matrix h = charge_function_operator(grid, [=](double n) {
               const double x = n + offset;
               return EC * x * x;
             }).entries();
  h -= ej_prime(p.EJ, d) * phase_function_operator(grid, PhaseFunction::cosine(half_s)).entries();
  return OperatorMatrix(std::move(h), Role::hermitian);
}

}  // namespace qdeform
