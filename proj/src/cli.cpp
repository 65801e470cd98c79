#include "qdeform/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdeform/classical_dynamics.hpp"
#include "qdeform/csv.hpp"
#include "qdeform/jj_model.hpp"
#include "qdeform/qalgebra.hpp"
#include "qdeform/qrate.hpp"
#include "qdeform/quantum_dynamics.hpp"
#include "qdeform/ring_model.hpp"

namespace qdeform::cli {

namespace {

constexpr double kIdentityTol = 1e-10;
constexpr double kExactTol = 1e-12;
constexpr double kExpectationTol = 1e-6;
constexpr double kSpotTol = 1e-15;
constexpr double kWrapTol = 1e-10;
constexpr double kNormTol = 1e-10;
constexpr double kScanRelTol = 2e-2;
constexpr double kScanAbsTol = 5e-3;

bool known_scenario(const std::string& name) {
  for (const auto& s : kScenarios) {
    if (s == name) return true;
  }
  return false;
}

JJParams junction(const RunConfig& c) { return JJParams{c.EJ, c.EC, c.Ibias}; }

// Collects checks and the output table for one scenario.
struct Outcome {
  CsvTable table;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, Matrix>> matrices;

  void check(std::string name, double value, double tolerance) {
    checks.push_back({std::move(name), value, tolerance, value <= tolerance});
  }
};

void add_residual(std::vector<ResidualRow>& rows, Outcome& out, const RunConfig& c,
                  std::string observable, double value, double tolerance) {
  rows.push_back({c.M, c.interior(), c.deformation(), c.t, observable, value});
  out.check(std::move(observable), value, tolerance);
}

Outcome verify_identities(const RunConfig& c) {
  const PhaseGrid grid(c.M);
  const int K = c.interior();
  const JJParams p = junction(c);
  const Deformation d(c.deformation());
  const double tol = c.tol > 0.0 ? c.tol : kIdentityTol;
  Outcome out;
  std::vector<ResidualRow> rows;

  for (const auto& r : closed_form_residuals(grid, K, p, d, c.t)) {
    add_residual(rows, out, c, r.observable, r.residual_max, tol);
  }

  const OperatorMatrix P = interior_projector(grid, K);
  const OperatorMatrix n = number_operator(grid);
  const OperatorMatrix phi = phase_function_operator(grid, PhaseFunction::angle());
  const OperatorMatrix H = build_hamiltonian(grid, p, c.t);
  const OperatorMatrix Hs = build_deformed_hamiltonian(grid, p, d, c.t);
  add_residual(rows, out, c, "[n,H_s]/i - D_t n",
               max_abs(project(P, standard_rate(n, Hs).entries() -
                                      generalized_rate(n, H, d).entries())),
               tol);

  const QPlaneReport q = verify_qplane(grid, d, K);
  add_residual(rows, out, c, "q-plane interior", q.residual_interior, kExactTol);

  const RingParams ring{c.inertia, c.V0, d.s()};
  const RingParams ring0{c.inertia, c.V0, 0.0};
  add_residual(rows, out, c, "ring D_t phi",
               max_abs(project(P, generalized_rate(phi, build_ring_hamiltonian(grid, ring0), d)
                                          .entries() -
                                      ring_rate_phi(grid, ring).entries())),
               tol);

  add_residual(rows, out, c, "D_t H", max_abs(generalized_rate(H, H, d).entries()), kExactTol);

  out.table = residual_table(rows);
  if (c.dump_matrices) {
    out.matrices.emplace_back("n", n.entries());
    out.matrices.emplace_back("H", H.entries());
    out.matrices.emplace_back("H_s", Hs.entries());
  }
  return out;
}

Outcome rates(const RunConfig& c) {
  const PhaseGrid grid(c.M);
  const JJParams p = junction(c);
  const Deformation d(c.deformation());
  const double tol = c.tol > 0.0 ? c.tol : kExactTol;
  const OperatorMatrix H = build_hamiltonian(grid, p, c.t);
  const std::vector<std::pair<std::string, OperatorMatrix>> observables = {
      {"n", number_operator(grid)},
      {"phi", phase_function_operator(grid, PhaseFunction::angle())},
  };
  Outcome out;
  std::vector<ResidualRow> rows;
  for (const auto& [name, A] : observables) {
    const Matrix gen = generalized_rate(A, H, d).entries();
    const Matrix std_rate = standard_rate(A, H).entries();
    const double gap = max_abs(gen - std_rate);
    rows.push_back({c.M, c.interior(), d.s(), c.t, "generalized-standard " + name, gap});
    if (d.classical_limit()) {
      out.check("generalized-standard " + name, gap, tol);
    } else {
      const double conj = max_abs(gen - conjugation_form(A, H, d).entries());
      add_residual(rows, out, c, "generalized-conjugation " + name, conj, tol);
      add_residual(rows, out, c, "hermiticity " + name, hermiticity_residual(gen), tol);
    }
    if (c.dump_matrices) {
      out.matrices.emplace_back("generalized_" + name, gen);
      out.matrices.emplace_back("standard_" + name, std_rate);
    }
  }
  out.table = residual_table(rows);
  return out;
}

Outcome fraunhofer(const RunConfig& c) {
  SwitchingOptions opts;
  opts.T = c.T;
  opts.dt = c.dt;
  if (c.tol > 0.0) opts.tolerance = c.tol;
  const std::vector<SweepResult> scan = fraunhofer_scan(junction(c), c.s_grid(), opts);
  Outcome out;
  out.table = sweep_table(scan);
  for (const auto& r : scan) {
    const std::string name = "s=" + format_number(r.s);
    if (r.formula_value >= kRelErrorFloor) {
      out.check(name + " rel_error", r.rel_error, kScanRelTol);
    } else {
      out.check(name + " abs_error", std::abs(r.I_switch - r.formula_value), kScanAbsTol);
    }
  }
  return out;
}

Outcome evolve(const RunConfig& c) {
  const PhaseGrid grid(c.M);
  const JJParams p = junction(c);
  const double minimum = std::asin(std::clamp(p.Ibias, -1.0, 1.0));
  const double phi0 = c.phi0.value_or(minimum + 0.1);
  const double width = c.width.value_or(p.classical_ok() ? harmonic_width(p) : 0.3);
  const StateVector psi0 = gaussian_wavepacket(grid, phi0, c.n0, width);
  PropagateOptions opts;
  opts.deformation = Deformation(c.deformation());
  opts.stride = c.stride;
  const EvolutionTrace trace = propagate(psi0, grid, p, c.T, c.dt, opts);
  Outcome out;
  out.table = trace_table(trace);
  double drift = 0.0;
  for (double nrm : trace.norm) drift = std::max(drift, std::abs(nrm - 1.0));
  out.check("norm drift", drift, c.tol > 0.0 ? c.tol : kNormTol);
  return out;
}

Outcome ring_spectrum(const RunConfig& c) {
  const PhaseGrid grid(c.M);
  Outcome out;
  std::vector<SpectrumRow> rows;
  for (double s : c.s_grid()) {
    const SpectrumResult sp = spectrum(grid, RingParams{c.inertia, c.V0, s}, c.levels);
    for (std::size_t i = 0; i < sp.energies.size(); ++i) {
      rows.push_back({s, static_cast<int>(i), sp.energies[i]});
    }
    out.check("s=" + format_number(s) + " grid convergence", sp.last_change, kSpectrumTolerance);
  }
  out.table = spectrum_table(rows);
  return out;
}

Outcome equivalence(const RunConfig& c) {
  const PhaseGrid grid(c.M);
  const int K = c.interior();
  const JJParams p = junction(c);
  const Deformation d(c.deformation());
  const double tol = c.tol > 0.0 ? c.tol : kIdentityTol;
  const OperatorMatrix P = interior_projector(grid, K);
  const OperatorMatrix n = number_operator(grid);
  const OperatorMatrix phi = phase_function_operator(grid, PhaseFunction::angle());
  const OperatorMatrix H = build_hamiltonian(grid, p, c.t);
  const OperatorMatrix Hs = build_deformed_hamiltonian(grid, p, d, c.t);

  Outcome out;
  std::vector<ResidualRow> rows;
  add_residual(rows, out, c, "n channel (interior matrix)",
               max_abs(project(P, standard_rate(n, Hs).entries() -
                                      generalized_rate(n, H, d).entries())),
               tol);

  const Matrix std_phi = standard_rate(phi, Hs).entries();
  const Matrix gen_phi = generalized_rate(phi, H, d).entries();
  const Matrix closed_phi = closed_form_rate_phi(grid, p, d, c.t).entries();
  const RingParams ring{c.inertia, c.V0, d.s()};
  const Matrix ring_std = standard_rate(phi, build_ring_hamiltonian(grid, ring)).entries();
  const Matrix ring_closed = ring_rate_phi(grid, ring).entries();
  double wp_std = 0.0, wp_gen = 0.0, wp_ring = 0.0;
  for (double phi0 : {-0.6, 0.0, 0.8}) {
    for (double n0 : {-2.0, 0.0, 3.0}) {
      const Vector psi = gaussian_wavepacket(grid, phi0, n0, 0.3).amplitudes();
      const cplx ref = expectation(psi, closed_phi);
      wp_std = std::max(wp_std, std::abs(expectation(psi, std_phi) - ref));
      wp_gen = std::max(wp_gen, std::abs(expectation(psi, gen_phi) - ref));
      wp_ring = std::max(wp_ring, std::abs(expectation(psi, ring_std) -
                                           expectation(psi, ring_closed)));
    }
  }
  add_residual(rows, out, c, "phi channel [phi,H_s]/i (wavepacket)", wp_std, kExpectationTol);
  add_residual(rows, out, c, "phi channel D_t phi (wavepacket)", wp_gen, kExpectationTol);
  add_residual(rows, out, c, "ring [phi,H_s]/i (wavepacket)", wp_ring, kExpectationTol);
  add_residual(rows, out, c, "ej_prime(pi)",
               std::abs(ej_prime(c.EJ, Deformation(kPi)) - 2.0 * c.EJ / kPi), kSpotTol);
  add_residual(rows, out, c, "ej_prime(2pi)", std::abs(ej_prime(c.EJ, Deformation(2.0 * kPi))),
               kSpotTol);
  out.table = residual_table(rows);
  return out;
}

Outcome qplane(const RunConfig& c) {
  const PhaseGrid grid(c.M);
  Outcome out;
  std::vector<QPlaneReport> reports;
  for (double s : c.s_grid()) {
    const QPlaneReport r = verify_qplane(grid, Deformation(s), c.interior());
    reports.push_back(r);
    const std::string name = "s=" + format_number(s);
    out.check(name + " interior", r.residual_interior, kExactTol);
    if (r.commensurate) {
      out.check(name + " full (commensurate)", r.residual_full, kExactTol);
    } else {
      out.check(name + " off-wrap", r.off_wrap_residual, kExactTol);
      out.check(name + " wrap factor", std::abs(r.wrap_magnitude - r.wrap_predicted), kWrapTol);
    }
  }
  out.table = qplane_table(reports);
  return out;
}

std::vector<std::pair<std::string, std::string>> echo(const RunConfig& c) {
  auto num = [](double x) { return format_number(x); };
  std::vector<std::pair<std::string, std::string>> m = {
      {"scenario", c.scenario},
      {"M", std::to_string(c.M)},
      {"K", std::to_string(c.interior())},
      {"EJ", num(c.EJ)},
      {"EC", num(c.EC)},
      {"Ibias", num(c.Ibias)},
      {"s", num(c.deformation())},
      {"Phi", c.Phi ? num(*c.Phi) : "none"},
      {"t", num(c.t)},
      {"dt", num(c.dt)},
      {"T", num(c.T)},
      {"s_min", num(c.s_min)},
      {"s_max", num(c.s_max)},
      {"s_step", num(c.s_step)},
      {"tol", num(c.tol)},
      {"levels", std::to_string(c.levels)},
      {"inertia", num(c.inertia)},
      {"V0", num(c.V0)},
      {"phi0", c.phi0 ? num(*c.phi0) : "default"},
      {"n0", num(c.n0)},
      {"width", c.width ? num(*c.width) : "default"},
      {"stride", std::to_string(c.stride)},
      {"dump_matrices", c.dump_matrices ? "1" : "0"},
  };
  return m;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw UsageError("cannot write output file " + path);
  return os;
}

void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "scenario") continue;  // handled by the caller
    if (key == "M") c.M = value.get<int>();
    else if (key == "K") c.K = value.get<int>();
    else if (key == "EJ") c.EJ = value.get<double>();
    else if (key == "EC") c.EC = value.get<double>();
    else if (key == "Ibias" || key == "I") c.Ibias = value.get<double>();
    else if (key == "s") c.s = value.get<double>();
    else if (key == "Phi" || key == "phi_flux") c.Phi = value.get<double>();
    else if (key == "t") c.t = value.get<double>();
    else if (key == "dt") c.dt = value.get<double>();
    else if (key == "T") c.T = value.get<double>();
    else if (key == "s_min") c.s_min = value.get<double>();
    else if (key == "s_max") c.s_max = value.get<double>();
    else if (key == "s_step") c.s_step = value.get<double>();
    else if (key == "tol") c.tol = value.get<double>();
    else if (key == "levels") c.levels = value.get<int>();
    else if (key == "inertia") c.inertia = value.get<double>();
    else if (key == "V0") c.V0 = value.get<double>();
    else if (key == "phi0") c.phi0 = value.get<double>();
    else if (key == "n0") c.n0 = value.get<double>();
    else if (key == "width") c.width = value.get<double>();
    else if (key == "stride") c.stride = value.get<int>();
    else if (key == "out") c.out = value.get<std::string>();
    else throw UsageError("unknown config key '" + key + "'");
  }
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
}

}  // namespace

double RunConfig::deformation() const {
  return Phi ? flux_to_s(FluxMap{*Phi, 1.0}).s() : s;
}

std::vector<double> RunConfig::s_grid() const {
  if (s_step == 0.0) return {deformation()};
  if (!(s_step > 0.0) || !(s_max >= s_min)) {
    throw UsageError("s grid needs s_step > 0 and s_max >= s_min");
  }
  std::vector<double> grid;
  const long count = std::lround(std::floor((s_max - s_min) / s_step + 1e-9));
  for (long i = 0; i <= count; ++i) grid.push_back(s_min + i * s_step);
  return grid;
}

std::string RunConfig::output_path() const {
  if (!out.empty()) return out;
  const char* dir = std::getenv(kOutDirEnv);
  const std::string base = (dir && *dir) ? std::string(dir) : std::string(".");
  return base + "/" + scenario + ".csv";
}

RunConfig default_config(const std::string& scenario) {
  if (!known_scenario(scenario)) throw UsageError("unknown scenario '" + scenario + "'");
  RunConfig c;
  c.scenario = scenario;
  if (scenario == "verify-identities" || scenario == "equivalence") {
    c.EC = 0.01;
    c.s = 1.0;
  } else if (scenario == "rates") {
    c.M = 128;
    c.EC = 0.01;
    c.s = 0.5;
  } else if (scenario == "fraunhofer") {
    c.s_min = -4.0 * kPi;
    c.s_max = 4.0 * kPi;
    c.s_step = kPi / 8.0;
  } else if (scenario == "evolve") {
    c.EC = 0.01;
    c.T = 50.0;
    c.s = 1.0;
  } else if (scenario == "ring-spectrum") {
    c.M = 128;
  } else if (scenario == "qplane") {
    c.s = 1.0;
  }
  return c;
}

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"qdeform: q-deformed Heisenberg rate laboratory"};
  std::string positional, flag_scenario, config_path;
  RunConfig f;  // flag values; only the ones that were passed get applied
  double phi_flux = 0.0, phi0 = 0.0, width = 0.0;

  app.add_option("SCENARIO", positional, "Scenario to run");
  app.add_option("--scenario", flag_scenario, "Scenario to run");
  app.add_option("--config", config_path, "JSON config file");
  std::map<std::string, CLI::Option*> opt;
  opt["M"] = app.add_option("--M", f.M, "Grid size (even, 8..4096)");
  opt["K"] = app.add_option("--K", f.K, "Interior charge cutoff (default M/4)");
  opt["EJ"] = app.add_option("--EJ", f.EJ, "Josephson energy");
  opt["EC"] = app.add_option("--EC", f.EC, "Charging energy 2e^2/C");
  opt["I"] = app.add_option("--I", f.Ibias, "Bias current in units of I_J");
  opt["s"] = app.add_option("--s", f.s, "Deformation s (q = exp(i s))");
  opt["Phi"] = app.add_option("--phi-flux", phi_flux, "Flux in units of phi0; sets s = 2 pi Phi");
  opt["t"] = app.add_option("--t", f.t, "Time at which H(t) is frozen");
  opt["dt"] = app.add_option("--dt", f.dt, "Time step");
  opt["T"] = app.add_option("--T", f.T, "Duration");
  opt["s_min"] = app.add_option("--s-min", f.s_min, "Sweep start");
  opt["s_max"] = app.add_option("--s-max", f.s_max, "Sweep end");
  opt["s_step"] = app.add_option("--s-step", f.s_step, "Sweep step (0: single s)");
  opt["tol"] = app.add_option("--tol", f.tol, "Scenario tolerance override");
  opt["levels"] = app.add_option("--levels,--k", f.levels, "Number of spectrum levels");
  opt["inertia"] = app.add_option("--inertia", f.inertia, "Ring moment of inertia");
  opt["V0"] = app.add_option("--V0", f.V0, "Ring potential strength");
  opt["phi0"] = app.add_option("--phi0", phi0, "Wavepacket centre");
  opt["n0"] = app.add_option("--n0", f.n0, "Wavepacket mean charge");
  opt["width"] = app.add_option("--width", width, "Wavepacket phase width");
  opt["stride"] = app.add_option("--stride", f.stride, "Trace sampling stride");
  opt["out"] = app.add_option("--out", f.out, "Output CSV path");
  auto* dump = app.add_flag("--dump-matrices", f.dump_matrices, "Also dump operator matrices");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  nlohmann::json file;
  if (!config_path.empty()) file = read_json(config_path);

  std::string scenario = !flag_scenario.empty() ? flag_scenario : positional;
  if (!flag_scenario.empty() && !positional.empty() && flag_scenario != positional) {
    throw UsageError("conflicting scenarios '" + positional + "' and '" + flag_scenario + "'");
  }
  if (scenario.empty() && file.contains("scenario")) scenario = file["scenario"].get<std::string>();
  if (scenario.empty()) throw UsageError("no scenario given");

  RunConfig c = default_config(scenario);
  if (!config_path.empty()) {
    try {
      apply_json(c, file);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config file " + config_path + ": " + e.what());
    }
  }

  auto given = [&](const char* key) { return opt.at(key)->count() > 0; };
  if (given("M")) c.M = f.M;
  if (given("K")) c.K = f.K;
  if (given("EJ")) c.EJ = f.EJ;
  if (given("EC")) c.EC = f.EC;
  if (given("I")) c.Ibias = f.Ibias;
  if (given("s")) {
    c.s = f.s;
    c.Phi.reset();
  }
  if (given("Phi")) c.Phi = phi_flux;
  if (given("t")) c.t = f.t;
  if (given("dt")) c.dt = f.dt;
  if (given("T")) c.T = f.T;
  if (given("s_min")) c.s_min = f.s_min;
  if (given("s_max")) c.s_max = f.s_max;
  if (given("s_step")) c.s_step = f.s_step;
  if (given("tol")) c.tol = f.tol;
  if (given("levels")) c.levels = f.levels;
  if (given("inertia")) c.inertia = f.inertia;
  if (given("V0")) c.V0 = f.V0;
  if (given("phi0")) c.phi0 = phi0;
  if (given("n0")) c.n0 = f.n0;
  if (given("width")) c.width = width;
  if (given("stride")) c.stride = f.stride;
  if (given("out")) c.out = f.out;
  if (dump->count() > 0) c.dump_matrices = true;
  return c;
}

RunResult run(const RunConfig& config, std::ostream& log) {
  static const std::map<std::string, std::function<Outcome(const RunConfig&)>> dispatch = {
      {"verify-identities", verify_identities}, {"rates", rates},
      {"fraunhofer", fraunhofer},               {"evolve", evolve},
      {"ring-spectrum", ring_spectrum},         {"equivalence", equivalence},
      {"qplane", qplane},
  };
  const auto it = dispatch.find(config.scenario);
  if (it == dispatch.end()) throw UsageError("unknown scenario '" + config.scenario + "'");

  const std::string path = config.output_path();
  std::ofstream os = open_output(path);

  Outcome outcome = it->second(config);
  outcome.table.meta = echo(config);
  for (const auto& ch : outcome.checks) {
    outcome.table.meta.emplace_back(
        "check", ch.name + ";value=" + format_number(ch.value) +
                     ";tolerance=" + format_number(ch.tolerance) + (ch.pass ? ";pass" : ";fail"));
  }
  outcome.table.write(os);
  os.close();
  if (!os) throw UsageError("failed writing " + path);

  RunResult result;
  result.files.push_back(path);
  for (const auto& [name, m] : outcome.matrices) {
    const std::string mpath = path + "." + name + ".matrix.csv";
    std::ofstream ms = open_output(mpath);
    write_matrix_csv(ms, m);
    result.files.push_back(mpath);
  }

  bool all = true;
  for (const auto& ch : outcome.checks) {
    log << (ch.pass ? "PASS " : "FAIL ") << ch.name << " value=" << format_number(ch.value)
        << " tol=" << format_number(ch.tolerance) << '\n';
    all = all && ch.pass;
  }
  result.checks = std::move(outcome.checks);
  result.exit_code = all ? kPass : kCheckFailure;
  return result;
}

int main_entry(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
  auto record = [&](const char* kind, const std::string& message) {
    err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
  };
  try {
    const RunConfig config = parse_args(argc, argv);
    return run(config, log).exit_code;
  } catch (const UsageError& e) {
    record(e.kind(), e.what());
    return kUsageError;
  } catch (const ConfigError& e) {
    record(e.kind(), e.what());
    return kUsageError;
  } catch (const Error& e) {
    record(e.kind(), e.what());
    return kCheckFailure;
  } catch (const std::exception& e) {
    record("internal", e.what());
    return kCheckFailure;
  }
}

}  // namespace qdeform::cli
