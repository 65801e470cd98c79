#pragma once

// Classical washboard dynamics of the junction phase, deformed by s:
//   C phi'' = I - I_J sinc(s/2) sin(phi - s/2),   C = 1 / (2 E_C).
// At s = 0 this is the undamped, noise-free tilted pendulum.

#include <optional>
#include <utility>
#include <vector>

#include "qdeform/deformation.hpp"
#include "qdeform/errors.hpp"
#include "qdeform/jj_model.hpp"

namespace qdeform {

struct WashboardState {
  double phi = 0.0;     // unbounded winding angle
  double phidot = 0.0;
  double t = 0.0;
};

using Trajectory = std::vector<WashboardState>;

class WashboardIntegrationError : public IntegrationError {
 public:
  WashboardIntegrationError(const std::string& what, WashboardState last)
      : IntegrationError(what), last_valid(last) {}
  WashboardState last_valid;
};

// U(phi) = -(2 / (hbar e)) (I_J cos phi + I phi) = -4 (I_J cos phi + I phi)
// in the unit convention. Only its shape matters for the dynamics.
double potential(double phi, const JJParams& p);
double potential_derivative(double phi, const JJParams& p);

// phi'' = 2 E_C (I - I_J sinc(s/2) sin(phi - s/2)).
double deformed_rhs(const WashboardState& state, const JJParams& p, const Deformation& d);

// Stable static solution I = I_J sinc(s/2) sin(phi - s/2) in [-pi, pi) + s/2,
// if one exists.
std::optional<double> static_minimum(const JJParams& p, const Deformation& d);

// (hbar C / 2e) phidot^2 / 2 - I_J sinc(s/2) cos(phi - s/2) - I phi.
double washboard_energy(const WashboardState& state, const JJParams& p, const Deformation& d);

// Fixed-step RK4 from state0 over duration T; samples every `stride` steps
// plus the final state. Throws WashboardIntegrationError on a non-finite state.
Trajectory integrate(const WashboardState& state0, const JJParams& p, const Deformation& d,
                     double T, double dt, int stride = 1);

struct SwitchingOptions {
  double I_max = 1.1;
  double tolerance = 1e-3;
  double T = 200.0;
  double dt = 1e-3;
  double winding = 4.0 * kPi;  // running-state threshold after the transient
  double transient_fraction = 0.1;
};

struct SwitchingResult {
  double I_switch = 0.0;
  bool pattern_zero = false;  // escape already at I = tolerance
  // Every bias tried by the bisection with its outcome (true = running).
  std::vector<std::pair<double, bool>> ladder;
};

// True when the phase released at rest from the static minimum (or from
// phi = s/2 when none exists) winds more than opts.winding after the
// transient, for bias I (in units of I_J).
bool escapes(const JJParams& p, const Deformation& d, double I, const SwitchingOptions& opts);

// Bisection on I in [0, I_max] for the escape threshold; returns the bracket
// midpoint once the bracket is narrower than opts.tolerance.
SwitchingResult switching_current(const JJParams& p, const Deformation& d,
                                  const SwitchingOptions& opts = {});

struct SweepResult {
  double s = 0.0;
  double I_switch = 0.0;
  double formula_value = 0.0;  // |sinc(s/2)|
  double rel_error = 0.0;
  bool pattern_zero = false;
};

inline constexpr double kRelErrorFloor = 0.05;

// One switching-current search per s, results in s_grid order.
std::vector<SweepResult> fraunhofer_scan(const JJParams& p, const std::vector<double>& s_grid,
                                         const SwitchingOptions& opts = {});

}  // namespace qdeform
