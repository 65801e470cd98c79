#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/iostream.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>

#include "qdeform/classical_dynamics.hpp"
#include "qdeform/cli.hpp"
#include "qdeform/jj_model.hpp"
#include "qdeform/qalgebra.hpp"
#include "qdeform/qrate.hpp"
#include "qdeform/quantum_dynamics.hpp"
#include "qdeform/ring_model.hpp"

namespace py = pybind11;
using namespace qdeform;

namespace {

// Operators cross the boundary as plain complex arrays; they are hermitian
// inputs wherever the core requires it.
OperatorMatrix hermitian(const Matrix& m) { return OperatorMatrix(m, Role::hermitian); }

PhaseFunction phase_function(const std::string& kind, double shift) {
  if (kind == "angle") return PhaseFunction::angle();
  if (kind == "cos") return PhaseFunction::cosine(shift);
  if (kind == "sin") return PhaseFunction::sine(shift);
  if (kind == "exp_i") return PhaseFunction::exp_i();
  throw ConfigError("unknown phase function '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "q-deformed Heisenberg dynamics of a current-biased Josephson junction";

  static py::exception<Error> base(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<RoleError>(m, "RoleError", base.ptr());
  py::register_exception<IntegrationError>(m, "IntegrationError", base.ptr());

  py::class_<PhaseGrid>(m, "PhaseGrid")
      .def(py::init<int>(), py::arg("M"))
      .def_property_readonly("M", &PhaseGrid::size)
      .def_property_readonly("step", &PhaseGrid::step)
      .def_property_readonly("phi_points", [](const PhaseGrid& g) {
        return std::vector<double>(g.phi_points().begin(), g.phi_points().end());
      })
      .def_property_readonly("charge_values", &PhaseGrid::charge_values)
      .def_property_readonly("charge_states", &PhaseGrid::charge_states);

  py::class_<JJParams>(m, "JJParams")
      .def(py::init([](double EJ, double EC, double Ibias) { return JJParams{EJ, EC, Ibias}; }),
           py::arg("EJ") = 1.0, py::arg("EC") = 1.0, py::arg("Ibias") = 0.0)
      .def_readwrite("EJ", &JJParams::EJ)
      .def_readwrite("EC", &JJParams::EC)
      .def_readwrite("Ibias", &JJParams::Ibias)
      .def("classical_ok", &JJParams::classical_ok);

  py::class_<Deformation>(m, "Deformation")
      .def(py::init<double>(), py::arg("s") = 0.0)
      .def_property_readonly("s", &Deformation::s)
      .def_property_readonly("q", &Deformation::q)
      .def("classical_limit", &Deformation::classical_limit);

  py::class_<RingParams>(m, "RingParams")
      .def(py::init([](double inertia, double V0, double s) { return RingParams{inertia, V0, s}; }),
           py::arg("Minertia") = 1.0, py::arg("V0") = 0.0, py::arg("s") = 0.0)
      .def_readwrite("Minertia", &RingParams::Minertia)
      .def_readwrite("V0", &RingParams::V0)
      .def_readwrite("s", &RingParams::s);

  m.def("number_operator", [](const PhaseGrid& g) { return number_operator(g).entries(); });
  m.def("phase_operator",
        [](const PhaseGrid& g, const std::string& kind, double shift) {
          return phase_function_operator(g, phase_function(kind, shift)).entries();
        },
        py::arg("grid"), py::arg("kind") = "angle", py::arg("shift") = 0.0);
  m.def("interior_projector",
        [](const PhaseGrid& g, int K) { return interior_projector(g, K).entries(); });
  m.def("gaussian_wavepacket",
        [](const PhaseGrid& g, double phi0, double n0, double w) {
          return gaussian_wavepacket(g, phi0, n0, w).amplitudes();
        },
        py::arg("grid"), py::arg("phi0"), py::arg("n0"), py::arg("width"));

  m.def("build_hamiltonian",
        [](const PhaseGrid& g, const JJParams& p, double t) { return build_hamiltonian(g, p, t).entries(); },
        py::arg("grid"), py::arg("p"), py::arg("t") = 0.0);
  m.def("build_deformed_hamiltonian",
        [](const PhaseGrid& g, const JJParams& p, const Deformation& d, double t) {
          return build_deformed_hamiltonian(g, p, d, t).entries();
        },
        py::arg("grid"), py::arg("p"), py::arg("d"), py::arg("t") = 0.0);
  m.def("ej_prime", &ej_prime, py::arg("EJ"), py::arg("d"));
  m.def("critical_current", py::overload_cast<const Deformation&, double>(&critical_current),
        py::arg("d"), py::arg("phi"));
  m.def("flux_to_s", [](double Phi, double phi0) { return flux_to_s(FluxMap{Phi, phi0}); },
        py::arg("Phi"), py::arg("phi0") = 1.0);

  m.def("standard_rate", [](const Matrix& A, const Matrix& H) {
    return standard_rate(hermitian(A), hermitian(H)).entries();
  });
  m.def("generalized_rate", [](const Matrix& A, const Matrix& H, const Deformation& d) {
    return generalized_rate(hermitian(A), hermitian(H), d).entries();
  });
  m.def("conjugation_form", [](const Matrix& A, const Matrix& H, const Deformation& d) {
    return conjugation_form(hermitian(A), hermitian(H), d).entries();
  });
  m.def("naive_q_rate", [](const Matrix& A, const Matrix& H, const Deformation& d) {
    return naive_q_rate(OperatorMatrix(A, Role::general), hermitian(H), d).entries();
  });
  m.def("closed_form_rate_phi",
        [](const PhaseGrid& g, const JJParams& p, const Deformation& d, double t) {
          return closed_form_rate_phi(g, p, d, t).entries();
        },
        py::arg("grid"), py::arg("p"), py::arg("d"), py::arg("t") = 0.0);
  m.def("closed_form_rate_n", [](const PhaseGrid& g, const JJParams& p, const Deformation& d) {
    return closed_form_rate_n(g, p, d).entries();
  });
  m.def("closed_form_residuals",
        [](const PhaseGrid& g, int K, const JJParams& p, const Deformation& d, double t) {
          py::dict out;
          for (const auto& r : closed_form_residuals(g, K, p, d, t)) out[py::str(r.observable)] = r.residual_max;
          return out;
        },
        py::arg("grid"), py::arg("K"), py::arg("p"), py::arg("d"), py::arg("t") = 0.0);

  m.def("verify_qplane",
        [](const PhaseGrid& g, const Deformation& d, int K) {
          const QPlaneReport r = verify_qplane(g, d, K);
          py::dict out;
          out["s"] = r.s;
          out["M"] = r.M;
          out["K"] = r.K;
          out["residual_full"] = r.residual_full;
          out["residual_interior"] = r.residual_interior;
          out["wrap_magnitude"] = r.wrap_magnitude;
          out["wrap_predicted"] = r.wrap_predicted;
          out["off_wrap_residual"] = r.off_wrap_residual;
          out["commensurate"] = r.commensurate;
          return out;
        },
        py::arg("grid"), py::arg("d"), py::arg("K") = 0);

  m.def("switching_current",
        [](const JJParams& p, const Deformation& d, double T, double dt, double tol) {
          SwitchingOptions o;
          o.T = T;
          o.dt = dt;
          o.tolerance = tol;
          const SwitchingResult r = switching_current(p, d, o);
          return py::make_tuple(r.I_switch, r.pattern_zero);
        },
        py::arg("p"), py::arg("d"), py::arg("T") = 200.0, py::arg("dt") = 1e-3,
        py::arg("tolerance") = 1e-3);
  m.def("fraunhofer_scan",
        [](const JJParams& p, const std::vector<double>& s_grid, double T, double dt, double tol) {
          SwitchingOptions o;
          o.T = T;
          o.dt = dt;
          o.tolerance = tol;
          py::list out;
          for (const auto& r : fraunhofer_scan(p, s_grid, o)) {
            py::dict row;
            row["s"] = r.s;
            row["I_switch"] = r.I_switch;
            row["formula"] = r.formula_value;
            row["rel_error"] = r.rel_error;
            row["pattern_zero"] = r.pattern_zero;
            out.append(row);
          }
          return out;
        },
        py::arg("p"), py::arg("s_grid"), py::arg("T") = 200.0, py::arg("dt") = 1e-3,
        py::arg("tolerance") = 1e-3);

  m.def("propagate",
        [](const PhaseGrid& g, const JJParams& p, const Vector& psi0, double T, double dt,
           double s, int stride) {
          PropagateOptions o;
          o.deformation = Deformation(s);
          o.stride = stride;
          EvolutionTrace tr;
          {
            py::gil_scoped_release release;
            tr = propagate(StateVector(psi0), g, p, T, dt, o);
          }
          py::dict out;
          out["t"] = tr.times;
          out["exp_n"] = tr.exp_n;
          out["exp_phi"] = tr.exp_phi;
          out["exp_cos"] = tr.exp_cosphi;
          out["exp_sin"] = tr.exp_sinphi;
          out["exp_qn"] = tr.exp_qn;
          out["norm"] = tr.norm;
          out["final_state"] = tr.final_state.amplitudes();
          return out;
        },
        py::arg("grid"), py::arg("p"), py::arg("psi0"), py::arg("T"), py::arg("dt"),
        py::arg("s") = 0.0, py::arg("stride") = 1);
  m.def("ehrenfest_compare",
        [](const PhaseGrid& g, const JJParams& p, const Vector& psi0, double T, double dt) {
          return ehrenfest_compare(StateVector(psi0), g, p, T, dt).max_discrepancy;
        },
        py::arg("grid"), py::arg("p"), py::arg("psi0"), py::arg("T"), py::arg("dt"));

  m.def("build_ring_hamiltonian",
        [](const PhaseGrid& g, const RingParams& r) { return build_ring_hamiltonian(g, r).entries(); });
  m.def("ring_rate_phi",
        [](const PhaseGrid& g, const RingParams& r) { return ring_rate_phi(g, r).entries(); });
  m.def("spectrum",
        [](const PhaseGrid& g, const RingParams& r, int k) { return spectrum(g, r, k).energies; },
        py::arg("grid"), py::arg("r"), py::arg("k") = 10);

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::vector<const char*> argv{"qdeform"};
          for (const auto& a : args) argv.push_back(a.c_str());
          py::scoped_ostream_redirect out(std::cout), err(std::cerr);
          return cli::main_entry(static_cast<int>(argv.size()), argv.data(), std::cout, std::cerr);
        },
        py::arg("args"),
        "Runs the command-line tool in-process and returns its exit code.");
}
