#include "qdeform/classical_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qdeform {

namespace {

struct Rhs {
  double two_ec;
  double bias;
  double amplitude;  // I_J sinc(s/2)
  double shift;      // s/2

  double operator()(double phi) const {
    return two_ec * (bias - amplitude * std::sin(phi - shift));
  }
};

Rhs make_rhs(const JJParams& p, const Deformation& d, double bias) {
  return {2.0 * p.EC, bias, p.critical_current() * sinc(0.5 * d.s()), 0.5 * d.s()};
}

// One RK4 step of (phi, v)' = (v, f(phi)).
inline void rk4_step(const Rhs& f, double& phi, double& v, double dt) {
  const double k1x = v;
  const double k1v = f(phi);
  const double k2x = v + 0.5 * dt * k1v;
  const double k2v = f(phi + 0.5 * dt * k1x);
  const double k3x = v + 0.5 * dt * k2v;
  const double k3v = f(phi + 0.5 * dt * k2x);
  const double k4x = v + dt * k3v;
  const double k4v = f(phi + dt * k3x);
  phi += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
}

long step_count(double T, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step dt must be positive");
  if (!(T >= 10.0 * dt)) throw ConfigError("duration T must be at least 10 dt");
  return std::lround(T / dt);
}

double start_phase(const JJParams& p, const Deformation& d) {
  if (auto m = static_minimum(p, d)) return *m;
  return 0.5 * d.s();
}

}  // namespace

double potential(double phi, const JJParams& p) {
  return -4.0 * (p.critical_current() * std::cos(phi) + p.bias_current() * phi);
}

double potential_derivative(double phi, const JJParams& p) {
  return 4.0 * (p.critical_current() * std::sin(phi) - p.bias_current());
}

double deformed_rhs(const WashboardState& state, const JJParams& p, const Deformation& d) {
  return make_rhs(p, d, p.bias_current())(state.phi);
}

std::optional<double> static_minimum(const JJParams& p, const Deformation& d) {
  const double amplitude = p.critical_current() * sinc(0.5 * d.s());
  const double bias = p.bias_current();
  if (amplitude == 0.0 || std::abs(bias) > std::abs(amplitude)) return std::nullopt;
  const double ratio = std::clamp(bias / amplitude, -1.0, 1.0);
  // Stability needs amplitude * cos(phi - s/2) > 0.
  const double x = amplitude > 0.0 ? std::asin(ratio) : kPi - std::asin(ratio);
  return 0.5 * d.s() + x;
}

double washboard_energy(const WashboardState& state, const JJParams& p, const Deformation& d) {
  const double amplitude = p.critical_current() * sinc(0.5 * d.s());
  return 0.5 * p.capacitance() * state.phidot * state.phidot -
         amplitude * std::cos(state.phi - 0.5 * d.s()) - p.bias_current() * state.phi;
}

Trajectory integrate(const WashboardState& state0, const JJParams& p, const Deformation& d,
                     double T, double dt, int stride) {
  p.validate();
  if (stride < 1) throw ConfigError("sampling stride must be >= 1");
  const long steps = step_count(T, dt);
  const Rhs f = make_rhs(p, d, p.bias_current());

  Trajectory out;
  out.reserve(static_cast<std::size_t>(steps / stride + 2));
  out.push_back(state0);
  double phi = state0.phi;
  double v = state0.phidot;
  WashboardState last = state0;
  for (long i = 1; i <= steps; ++i) {
    rk4_step(f, phi, v, dt);
    const WashboardState now{phi, v, state0.t + i * dt};
    if (!std::isfinite(phi) || !std::isfinite(v)) {
      throw WashboardIntegrationError(
          "non-finite washboard state at t=" + std::to_string(now.t), last);
    }
    last = now;
    if (i % stride == 0 || i == steps) out.push_back(now);
  }
  return out;
}

bool escapes(const JJParams& p, const Deformation& d, double I, const SwitchingOptions& opts) {
  JJParams biased = p;
  biased.Ibias = I;
  const long steps = step_count(opts.T, opts.dt);
  const long transient = std::lround(opts.transient_fraction * steps);
  const Rhs f = make_rhs(biased, d, biased.bias_current());

  double phi = start_phase(biased, d);
  double v = 0.0;
  double reference = phi;
  for (long i = 1; i <= steps; ++i) {
    rk4_step(f, phi, v, opts.dt);
    if (!std::isfinite(phi) || !std::isfinite(v)) {
      throw WashboardIntegrationError("non-finite washboard state during escape test",
                                      WashboardState{phi, v, i * opts.dt});
    }
    if (i == transient) reference = phi;
    if (i > transient && std::abs(phi - reference) > opts.winding) return true;
  }
  return false;
}

SwitchingResult switching_current(const JJParams& p, const Deformation& d,
                                  const SwitchingOptions& opts) {
  p.validate();
  if (!(p.EJ > 0.0)) throw ConfigError("switching current needs EJ > 0");
  if (!(opts.tolerance > 0.0) || !(opts.I_max > opts.tolerance)) {
    throw ConfigError("switching search needs 0 < tolerance < I_max");
  }
  SwitchingResult result;
  auto probe = [&](double I) {
    const bool run = escapes(p, d, I, opts);
    result.ladder.emplace_back(I, run);
    return run;
  };

  double lo = opts.tolerance;
  if (probe(lo)) {
    result.pattern_zero = true;
    result.I_switch = 0.0;
    return result;
  }
  double hi = opts.I_max;
  if (!probe(hi)) {
    throw ConfigError("no escape at I_max = " + std::to_string(hi) +
                      "; switching current not bracketed");
  }
  while (hi - lo > opts.tolerance) {
    const double mid = 0.5 * (lo + hi);
    (probe(mid) ? hi : lo) = mid;
  }
  result.I_switch = 0.5 * (lo + hi);
  return result;
}

std::vector<SweepResult> fraunhofer_scan(const JJParams& p, const std::vector<double>& s_grid,
                                         const SwitchingOptions& opts) {
  std::vector<SweepResult> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    if (!std::isfinite(s)) throw ConfigError("s grid contains a non-finite value");
    const Deformation d(s);
    const SwitchingResult sw = switching_current(p, d, opts);
    SweepResult r;
    r.s = s;
    r.I_switch = sw.I_switch;
    r.formula_value = critical_current_max(d);
    r.rel_error = std::abs(r.I_switch - r.formula_value) / std::max(r.formula_value, kRelErrorFloor);
    r.pattern_zero = sw.pattern_zero;
    out.push_back(r);
  }
  return out;
}

}  // namespace qdeform
