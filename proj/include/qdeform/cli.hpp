#pragma once

// Scenario runner behind the `qdeform` command-line tool.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qdeform/errors.hpp"

namespace qdeform::cli {

inline const std::vector<std::string> kScenarios = {
    "verify-identities", "rates", "fraunhofer", "evolve", "ring-spectrum", "equivalence", "qplane"};

inline constexpr const char* kOutDirEnv = "QDEFORM_OUT_DIR";

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kUsageError = 2 };

class UsageError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "usage"; }
};

// Effective configuration of one run. Defaults depend on the scenario; see
// default_config(). Precedence: defaults < --config file < flags.
struct RunConfig {
  std::string scenario;
  int M = 256;
  int K = 0;  // interior cutoff, 0 means M/4
  double EJ = 1.0;
  double EC = 1.0;
  double Ibias = 0.0;
  double s = 0.0;
  std::optional<double> Phi;  // flux in units of phi0; overrides s when set
  double t = 0.0;
  double dt = 1e-3;
  double T = 200.0;
  double s_min = 0.0;
  double s_max = 0.0;
  double s_step = 0.0;  // 0 means "use s only"
  double tol = 0.0;     // 0 means the scenario's built-in tolerances
  int levels = 10;
  double inertia = 1.0;
  double V0 = 1.0;
  std::optional<double> phi0;  // evolve: packet centre, default minimum + 0.1
  double n0 = 0.0;
  std::optional<double> width;  // evolve: default harmonic width
  int stride = 10;
  bool dump_matrices = false;
  std::string out;  // empty: $QDEFORM_OUT_DIR/<scenario>.csv or ./<scenario>.csv

  double deformation() const;
  int interior() const { return K > 0 ? K : M / 4; }
  // s_min..s_max by s_step, or {deformation()} when s_step is 0.
  std::vector<double> s_grid() const;
  std::string output_path() const;
};

RunConfig default_config(const std::string& scenario);

// Parses argv; throws UsageError on bad flags, unknown scenario or an
// unreadable config file.
RunConfig parse_args(int argc, const char* const* argv);

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct RunResult {
  int exit_code = kPass;
  std::vector<std::string> files;
  std::vector<Check> checks;
};

// Runs the scenario, writes its CSV (and matrix dumps when requested), and
// prints one line per check to `log`.
RunResult run(const RunConfig& config, std::ostream& log);

// Whole program. Errors become an exit code plus a JSON record on `err`.
int main_entry(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

}  // namespace qdeform::cli
