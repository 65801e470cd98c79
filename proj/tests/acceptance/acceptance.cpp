// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed below.
//
// Usage: qdeform_acceptance <path-to-qdeform-cli> [--expect-fail=2,8]
// Exit status is 0 iff every criterion passes, or, with --expect-fail, iff
// the failing set is exactly the listed one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qdeform/classical_dynamics.hpp"
#include "qdeform/jj_model.hpp"
#include "qdeform/qalgebra.hpp"
#include "qdeform/qrate.hpp"
#include "qdeform/quantum_dynamics.hpp"
#include "qdeform/ring_model.hpp"

using namespace qdeform;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string cli_path;

Verdict fraunhofer_pattern() {
  constexpr double kRel = 2e-2, kAbs = 5e-3, kBudget = 120.0;
  std::vector<double> grid;
  for (int i = -32; i <= 32; ++i) grid.push_back(i * kPi / 8.0);
  const auto start = std::chrono::steady_clock::now();
  const auto scan = fraunhofer_scan(JJParams{1.0, 1.0, 0.0}, grid, SwitchingOptions{});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  double worst_rel = 0.0, worst_abs = 0.0;
  int zeros = 0;
  for (const auto& r : scan) {
    if (r.formula_value >= kRelErrorFloor) {
      worst_rel = std::max(worst_rel, r.rel_error);
    } else {
      worst_abs = std::max(worst_abs, std::abs(r.I_switch - r.formula_value));
    }
    if (r.formula_value < 1e-12) ++zeros;
  }
  Verdict v;
  v.require(worst_rel <= kRel, "max rel error " + fmt(worst_rel) + " <= " + fmt(kRel));
  v.require(zeros == 4 && worst_abs <= kAbs,
            std::to_string(zeros) + " zeros, max abs error " + fmt(worst_abs) + " <= " + fmt(kAbs));
  v.require(secs <= kBudget, "runtime " + fmt(secs) + " s <= " + fmt(kBudget) + " s");
  return v;
}

Verdict deformed_equations() {
  constexpr double kTol = 1e-10;
  const PhaseGrid grid(256);
  Verdict v;
  for (const std::string obs : {"D_t phi", "D_t n"}) {
    for (double s : {0.5, 1.0, 2.0}) {
      double worst = 0.0;
      for (double t : {0.0, 1.0}) {
        for (double I : {0.0, 0.3}) {
          for (const auto& r : closed_form_residuals(grid, 64, JJParams{1.0, 0.01, I},
                                                     Deformation(s), t)) {
            if (r.observable == obs) worst = std::max(worst, r.residual_max);
          }
        }
      }
      v.require(worst <= kTol, obs + " s=" + fmt(s) + ": " + fmt(worst));
    }
  }
  return v;
}

Verdict hamiltonian_equivalence() {
  constexpr double kMatrix = 1e-10, kExpect = 1e-6, kSpot = 1e-15;
  const PhaseGrid grid(256);
  const OperatorMatrix P = interior_projector(grid, 64);
  const OperatorMatrix n = number_operator(grid);
  const OperatorMatrix phi = phase_function_operator(grid, PhaseFunction::angle());
  const JJParams p{1.0, 0.01, 0.3};
  const double t = 1.0;
  double worst_n = 0.0, worst_phi = 0.0;
  for (double s : {0.5, 1.0, 2.0}) {
    const Deformation d(s);
    const OperatorMatrix H = build_hamiltonian(grid, p, t);
    const OperatorMatrix Hs = build_deformed_hamiltonian(grid, p, d, t);
    worst_n = std::max(worst_n, max_abs(project(P, standard_rate(n, Hs).entries() -
                                                       generalized_rate(n, H, d).entries())));
    const Matrix lhs = standard_rate(phi, Hs).entries();
    const Matrix rhs = closed_form_rate_phi(grid, p, d, t).entries();
    for (double phi0 : {-0.6, 0.0, 0.8}) {
      for (double n0 : {-2.0, 0.0, 3.0}) {
        const Vector psi = gaussian_wavepacket(grid, phi0, n0, 0.3).amplitudes();
        worst_phi = std::max(worst_phi, std::abs(expectation(psi, lhs) - expectation(psi, rhs)));
      }
    }
  }
  const double spot_pi = std::abs(ej_prime(1.0, Deformation(kPi)) - 2.0 / kPi);
  const double spot_2pi = std::abs(ej_prime(1.0, Deformation(2.0 * kPi)));
  Verdict v;
  v.require(worst_n <= kMatrix, "n channel interior " + fmt(worst_n));
  v.require(worst_phi <= kExpect, "phi channel wavepacket " + fmt(worst_phi));
  v.require(spot_pi <= kSpot && spot_2pi <= kSpot,
            "EJ'(pi) err " + fmt(spot_pi) + ", EJ'(2pi) " + fmt(spot_2pi));
  return v;
}

Verdict qplane_relation() {
  constexpr double kExact = 1e-12, kWrap = 1e-10;
  const PhaseGrid grid(256);
  double comm = 0.0, interior = 0.0, off_wrap = 0.0, wrap = 0.0;
  for (int j : {1, 5, 17, 100}) {
    comm = std::max(comm, verify_qplane(grid, Deformation(2.0 * kPi * j / 256)).residual_full);
  }
  for (double s : {0.5, 1.0, 2.3, -0.7}) {
    const QPlaneReport r = verify_qplane(grid, Deformation(s));
    interior = std::max(interior, r.residual_interior);
    off_wrap = std::max(off_wrap, r.off_wrap_residual);
    wrap = std::max(wrap, std::abs(r.wrap_magnitude - r.wrap_predicted));
  }
  Verdict v;
  v.require(comm <= kExact, "commensurate full " + fmt(comm));
  v.require(interior <= kExact && off_wrap <= kExact,
            "incommensurate interior " + fmt(interior) + ", off-wrap " + fmt(off_wrap));
  v.require(wrap <= kWrap, "wrap factor mismatch " + fmt(wrap));
  return v;
}

Verdict classical_limit() {
  constexpr double kSlopeTol = 0.15;
  const PhaseGrid grid(64);
  const OperatorMatrix P = interior_projector(grid, 16);
  const OperatorMatrix n = number_operator(grid);
  const OperatorMatrix phi = phase_function_operator(grid, PhaseFunction::angle());
  const OperatorMatrix H = build_hamiltonian(grid, JJParams{1.0, 0.01, 0.3}, 1.0);
  std::vector<double> xs, ys;
  for (double s : {0.4, 0.2, 0.1, 0.05}) {
    const double r = max_abs(project(
        P, generalized_rate(n, H, Deformation(s)).entries() - standard_rate(n, H).entries()));
    xs.push_back(std::log(s));
    ys.push_back(std::log(r));
  }
  const double mx = (xs[0] + xs[1] + xs[2] + xs[3]) / 4, my = (ys[0] + ys[1] + ys[2] + ys[3]) / 4;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 4; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  double at_zero = 0.0;
  for (const OperatorMatrix* A : {&n, &phi}) {
    at_zero = std::max(at_zero, max_abs(generalized_rate(*A, H, Deformation(0.0)).entries() -
                                        standard_rate(*A, H).entries()));
  }
  Verdict v;
  v.require(std::abs(slope - 1.0) <= kSlopeTol, "log-log slope " + fmt(slope));
  v.require(at_zero == 0.0, "s=0 path vs standard rate " + fmt(at_zero));
  return v;
}

Verdict energy_conservation() {
  constexpr double kTol = 1e-12, kNaiveFraction = 0.1;
  const PhaseGrid grid(64);
  const OperatorMatrix H = build_hamiltonian(grid, JJParams{1.0, 0.01, 0.3}, 1.0);
  const double h2 = max_abs(H.entries() * H.entries());
  double worst = 0.0, ratio = 1e300;
  for (double s : {0.05, 0.1, 0.5, 1.0, 2.0, kPi}) {
    const Deformation d(s);
    worst = std::max(worst, max_abs(generalized_rate(H, H, d).entries()));
    const double naive = max_abs(naive_q_rate(H, H, d).entries());
    ratio = std::min(ratio, naive / (h2 * std::abs(1.0 - d.q())));
  }
  Verdict v;
  v.require(worst <= kTol, "max |D_t H| " + fmt(worst));
  v.require(ratio >= kNaiveFraction, "min naive / (|H^2| |1-q|) " + fmt(ratio));
  return v;
}

Verdict ring_model() {
  // kFree: "exact" closed form, up to eigensolver roundoff at ||H|| ~ 1e3.
  constexpr double kIdentity = 1e-10, kPeriodic = 1e-8, kFree = 1e-10;
  const PhaseGrid grid(256);
  const OperatorMatrix P = interior_projector(grid, 64);
  const OperatorMatrix phi = phase_function_operator(grid, PhaseFunction::angle());
  double identity = 0.0;
  for (double s : {1.0, 2.0}) {
    const Matrix D = generalized_rate(phi, build_ring_hamiltonian(grid, RingParams{1.0, 1.0, 0.0}),
                                      Deformation(s))
                         .entries();
    identity = std::max(identity,
                        max_abs(project(P, D - ring_rate_phi(grid, RingParams{1.0, 1.0, s}).entries())));
  }
  const PhaseGrid spec_grid(128);
  double periodic = 0.0;
  for (double s : {0.0, 0.3, 1.0, kPi}) {
    const auto a = spectrum(spec_grid, RingParams{1.0, 1.0, s}, 10).energies;
    const auto b = spectrum(spec_grid, RingParams{1.0, 1.0, s + 2.0}, 10).energies;
    for (int i = 0; i < 10; ++i) periodic = std::max(periodic, std::abs(a[i] - b[i]));
  }
  const PhaseGrid free_grid(64);
  double free = 0.0;
  for (double s : {0.0, 0.3, 1.0}) {
    std::vector<double> closed;
    for (int m : free_grid.charge_values()) closed.push_back((m + s / 2) * (m + s / 2) / 2.0);
    std::sort(closed.begin(), closed.end());
    const auto got = spectrum(free_grid, RingParams{1.0, 0.0, s}, 10).energies;
    for (int i = 0; i < 10; ++i) free = std::max(free, std::abs(got[i] - closed[i]));
  }
  Verdict v;
  v.require(identity <= kIdentity, "D_t phi identity interior " + fmt(identity));
  v.require(periodic <= kPeriodic, "E(s) vs E(s+2) " + fmt(periodic));
  v.require(free <= kFree, "V0=0 closed form " + fmt(free));
  return v;
}

Verdict quantum_classical() {
  constexpr double kTrack = 2e-2, kNorm = 1e-10, kLow = 3.5, kHigh = 4.5;
  const PhaseGrid grid(256);
  Verdict v;
  double drift = 0.0;
  for (auto [I, disp] : {std::pair{0.0, 0.05}, std::pair{0.5, 0.0}}) {
    const JJParams p{1.0, 0.01, I};
    const double T = 2.0 * kPi / plasma_frequency(p);
    const StateVector psi =
        gaussian_wavepacket(grid, std::asin(I) + disp, 0.0, harmonic_width(p));
    const EhrenfestReport r = ehrenfest_compare(psi, grid, p, T, 2e-3);
    v.require(r.max_discrepancy <= kTrack,
              "I=" + fmt(I) + " tracking " + fmt(r.max_discrepancy) + " <= " + fmt(kTrack));
    PropagateOptions opts;
    opts.stride = 100;
    for (double nrm : propagate(psi, grid, p, T, 2e-3, opts).norm) {
      drift = std::max(drift, std::abs(nrm - 1.0));
    }
  }
  v.require(drift <= kNorm, "norm drift " + fmt(drift));

  const PhaseGrid small(128);
  const JJParams p{1.0, 0.04, 0.3};
  PropagateOptions opts;
  opts.deformation = Deformation(1.0);
  const StateVector psi = gaussian_wavepacket(small, 0.4, 0.0, 0.3);
  std::vector<Vector> finals;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    finals.push_back(propagate(psi, small, p, 5.0, dt, opts).final_state.amplitudes());
  }
  const double ratio = (finals[0] - finals[1]).norm() / (finals[1] - finals[2]).norm();
  v.require(ratio >= kLow && ratio <= kHigh, "Richardson ratio " + fmt(ratio));
  return v;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Verdict determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qdeform_acceptance";
  fs::create_directories(dir);
  const std::vector<std::string> runs = {
      "rates --M 64 --s 0.7 --dump-matrices",
      "qplane --M 128 --s-min 0.2 --s-max 2.2 --s-step 0.5",
      "fraunhofer --s-min 0 --s-max 6.3 --s-step 1.57 --T 60",
      "evolve --M 128 --T 5 --dt 0.005",
      "ring-spectrum --s-min 0 --s-max 1 --s-step 0.5",
      "equivalence --M 128 --s 0.5",
  };
  Verdict v;
  int identical = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::string first;
    bool same = true, ok = true;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / ("run" + std::to_string(i) + "_" + std::to_string(rep) + ".csv");
      const std::string cmd = "\"" + cli_path + "\" " + runs[i] + " --out \"" + out.string() +
                              "\" > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      std::string bytes = slurp(out);
      if (runs[i].find("--dump-matrices") != std::string::npos) {
        bytes += slurp(out.string() + ".generalized_n.matrix.csv");
      }
      ok = ok && rc != -1 && !bytes.empty();
      if (rep == 0) first = bytes;
      else same = bytes == first;
    }
    identical += (ok && same) ? 1 : 0;
  }
  fs::remove_all(dir);
  v.require(identical == static_cast<int>(runs.size()),
            std::to_string(identical) + "/" + std::to_string(runs.size()) +
                " scenarios byte-identical across two runs");
  return v;
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <qdeform-cli> [--expect-fail=i,j]\n", argv[0]);
    return 2;
  }
  cli_path = argv[1];
  std::set<int> expected;
  for (int i = 2; i < argc; ++i) {
    const std::string arg = argv[i];
    const std::string key = "--expect-fail=";
    if (arg.rfind(key, 0) == 0) expected = parse_list(arg.substr(key.size()));
  }

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"Fraunhofer pattern", fraunhofer_pattern},
      {"Deformed equations of motion", deformed_equations},
      {"Deformed-Hamiltonian equivalence", hamiltonian_equivalence},
      {"q-plane relation", qplane_relation},
      {"Classical-limit recovery", classical_limit},
      {"Energy conservation contrast", energy_conservation},
      {"Ring model", ring_model},
      {"Quantum/classical consistency", quantum_classical},
      {"Determinism", determinism},
  };
  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    if (!v.pass) failed.insert(id);
    std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed.size(), criteria.size());
  if (failed == expected) return 0;
  if (!expected.empty()) std::printf("failing set differs from the expected set\n");
  return 1;
}
