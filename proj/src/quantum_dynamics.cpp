#include "qdeform/quantum_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdeform/classical_dynamics.hpp"
#include "qdeform/fourier.hpp"

namespace qdeform {

namespace {

long propagation_steps(double T, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step dt must be positive");
  if (!(T > 0.0)) throw ConfigError("duration T must be positive");
  return std::lround(T / dt);
}

double phi_min(const JJParams& p) {
  const double x = p.bias_current() / p.critical_current();
  if (std::abs(x) >= 1.0) throw ConfigError("no washboard minimum for |I| >= I_J");
  return std::asin(x);
}

// Strang splitting K(dt/2) V(dt) K(dt/2) with the kinetic factor evaluated at
// the interval midpoint. The state is kept in the charge basis between steps.
class SplitStepper {
 public:
  SplitStepper(const PhaseGrid& grid, const JJParams& p, double dt, const Vector& psi0)
      : grid_(grid), p_(p), dt_(dt), fft_(grid), potential_(grid.size()),
        kinetic_(grid.size()), psi_(psi0) {
    for (int k = 0; k < grid.size(); ++k) {
      potential_[k] = std::polar(1.0, dt * p.EJ * std::cos(grid.phi(k)));
    }
    fft_.to_charge(psi_, c_);
  }

  // Advance across [i dt, (i + 1) dt].
  void step(long i) {
    const double I = p_.bias_current();
    const double t_mid = (static_cast<double>(i) + 0.5) * dt_;
    for (int m = 0; m < grid_.size(); ++m) {
      const double x = grid_.charge(m) + I * t_mid;
      kinetic_[m] = std::polar(1.0, -0.5 * dt_ * p_.EC * x * x);
    }
    c_ = c_.cwiseProduct(kinetic_);
    if (p_.EJ != 0.0) {  // the potential factor is the identity otherwise
      fft_.to_grid(c_, psi_);
      psi_ = psi_.cwiseProduct(potential_);
      fft_.to_charge(psi_, c_);
    }
    c_ = c_.cwiseProduct(kinetic_);
    grid_stale_ = true;
  }

  const Vector& charge_amplitudes() const { return c_; }
  const Vector& grid_amplitudes() {
    if (grid_stale_) {
      fft_.to_grid(c_, psi_);
      grid_stale_ = false;
    }
    return psi_;
  }

 private:
  const PhaseGrid& grid_;
  JJParams p_;
  double dt_;
  ChargeTransform fft_;
  Vector potential_, kinetic_;
  Vector psi_, c_;
  bool grid_stale_ = false;
};

void check_step_size(const PhaseGrid& grid, const JJParams& p, double T, double dt) {
  const double bound = dt * hamiltonian_norm_bound(grid, p, T);
  if (bound > 0.5) {
    throw ConfigError("time step too large: dt * ||H|| = " + std::to_string(bound) + " > 0.5");
  }
}

}  // namespace

double hamiltonian_norm_bound(const PhaseGrid& grid, const JJParams& p, double t) {
  const double n_max = grid.size() / 2.0 + std::abs(p.bias_current() * t);
  return p.EC * n_max * n_max + p.EJ;
}

EvolutionTrace propagate(const StateVector& psi0, const PhaseGrid& grid, const JJParams& p,
                         double T, double dt, const PropagateOptions& opts) {
  p.validate();
  const int M = grid.size();
  if (psi0.dim() != M) throw DimensionError("initial state does not match the grid");
  if (opts.stride < 1) throw ConfigError("sampling stride must be >= 1");
  const long steps = propagation_steps(T, dt);
  check_step_size(grid, p, steps * dt, dt);

  const double s = opts.deformation.s();
  Vector q_n(M);
  for (int m = 0; m < M; ++m) q_n[m] = std::polar(1.0, s * grid.charge(m));

  SplitStepper stepper(grid, p, dt, psi0.amplitudes());
  EvolutionTrace trace;
  const std::size_t expected = static_cast<std::size_t>(steps / opts.stride + 2);
  trace.times.reserve(expected);

  auto sample = [&](double t) {
    const Vector& c = stepper.charge_amplitudes();
    const Vector& psi = stepper.grid_amplitudes();
    double en = 0.0, ephi = 0.0, esin = 0.0, ecos = 0.0, nrm = 0.0;
    cplx eq = 0.0;
    for (int m = 0; m < M; ++m) {
      const double w = std::norm(c[m]);
      en += w * grid.charge(m);
      eq += w * q_n[m];
    }
    for (int k = 0; k < M; ++k) {
      const double w = std::norm(psi[k]);
      const double phi = grid.phi(k);
      nrm += w;
      ephi += w * phi;
      esin += w * std::sin(phi);
      ecos += w * std::cos(phi);
    }
    trace.times.push_back(t);
    trace.exp_n.push_back(en);
    trace.exp_phi.push_back(ephi);
    trace.exp_sinphi.push_back(esin);
    trace.exp_cosphi.push_back(ecos);
    trace.exp_qn.push_back(eq);
    trace.norm.push_back(nrm);
    if (std::abs(nrm - 1.0) > opts.norm_limit) {
      throw IntegrationError("norm drift " + std::to_string(nrm - 1.0) + " at t=" +
                             std::to_string(t));
    }
    if (opts.monitor_cut && cut_mass(grid, psi) > opts.cut_limit) {
      throw IntegrationError("wavepacket reached the branch cut at t=" + std::to_string(t));
    }
  };

  sample(0.0);
  for (long i = 0; i < steps; ++i) {
    stepper.step(i);
    const long done = i + 1;
    if (done % opts.stride == 0 || done == steps) sample(done * dt);
  }
  trace.final_state = StateVector::normalized(stepper.grid_amplitudes());
  return trace;
}

double verify_inner_heisenberg(const StateVector& psi0, const PhaseGrid& grid,
                               const JJParams& p, const Deformation& d, double T, double dt) {
  p.validate();
  if (psi0.dim() != grid.size()) throw DimensionError("initial state does not match the grid");
  const long steps = propagation_steps(T, dt);
  if (steps < 2) throw ConfigError("need at least two steps for a centered difference");
  check_step_size(grid, p, steps * dt, dt);
  // q^n = 1: both sides vanish identically.
  if (d.classical_limit()) return 0.0;

  // H(t) = H0 + t H1 + t^2 H2; the coefficients come from builds at
  // t = -1, 0, 1, so the commutator is exact in t.
  const Matrix h0 = build_hamiltonian(grid, p, 0.0).entries();
  const Matrix hp = build_hamiltonian(grid, p, 1.0).entries();
  const Matrix hm = build_hamiltonian(grid, p, -1.0).entries();
  const Matrix h1 = 0.5 * (hp - hm);
  const Matrix h2 = 0.5 * (hp + hm) - h0;

  const double s = d.s();
  const Matrix q_n =
      charge_function_operator(grid, [s](double n) { return std::polar(1.0, s * n); },
                               Role::unitary)
          .entries();
  const cplx minus_i{0.0, -1.0};
  const Matrix c0 = minus_i * commutator(q_n, h0);
  const Matrix c1 = minus_i * commutator(q_n, h1);
  const Matrix c2 = minus_i * commutator(q_n, h2);

  SplitStepper stepper(grid, p, dt, psi0.amplitudes());
  std::vector<cplx> exp_q(static_cast<std::size_t>(steps) + 1);
  std::vector<cplx> rate(static_cast<std::size_t>(steps) + 1);
  for (long j = 0; j <= steps; ++j) {
    if (j > 0) stepper.step(j - 1);
    const Vector& psi = stepper.grid_amplitudes();
    const double t = j * dt;
    exp_q[j] = expectation(psi, q_n);
    rate[j] = expectation(psi, c0) + t * expectation(psi, c1) + t * t * expectation(psi, c2);
  }

  double worst = 0.0;
  for (long j = 1; j < steps; ++j) {
    const cplx fd = (exp_q[j + 1] - exp_q[j - 1]) / (2.0 * dt);
    worst = std::max(worst, std::abs(fd - rate[j]));
  }
  return worst;
}

double plasma_frequency(const JJParams& p) {
  return std::sqrt(2.0 * p.EC * p.critical_current() * std::cos(phi_min(p)));
}

double harmonic_width(const JJParams& p) {
  return std::pow(p.EC / (2.0 * p.EJ * std::cos(phi_min(p))), 0.25);
}

EhrenfestReport ehrenfest_compare(const StateVector& psi0, const PhaseGrid& grid,
                                  const JJParams& p, double T, double dt) {
  if (!p.classical_ok()) throw ConfigError("Ehrenfest comparison needs EJ/EC >= 20");
  PropagateOptions opts;
  opts.monitor_cut = true;
  opts.cut_limit = kEhrenfestCutLimit;
  const EvolutionTrace q = propagate(psi0, grid, p, T, dt, opts);

  const WashboardState start{q.exp_phi.front(), 2.0 * p.EC * q.exp_n.front(), 0.0};
  const Trajectory c = integrate(start, p, Deformation{}, T, dt, 1);

  EhrenfestReport r;
  const std::size_t n = std::min(c.size(), q.times.size());
  r.times.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.times.push_back(q.times[i]);
    r.quantum_phi.push_back(q.exp_phi[i]);
    r.classical_phi.push_back(c[i].phi);
    r.max_discrepancy = std::max(r.max_discrepancy, std::abs(q.exp_phi[i] - c[i].phi));
  }
  return r;
}

}  // namespace qdeform
