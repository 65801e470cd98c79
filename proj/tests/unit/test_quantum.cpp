#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "qdeform/quantum_dynamics.hpp"

using namespace qdeform;

namespace {

// Dense oracle for time-independent H: psi(t) = V exp(-i E t) V^dagger psi0.
struct DenseEvolution {
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  explicit DenseEvolution(const Matrix& H) : es(H) {}
  Vector at(const Vector& psi0, double t) const {
    const Vector c = es.eigenvectors().adjoint() * psi0;
    Vector phased(c.size());
    for (int i = 0; i < c.size(); ++i) phased[i] = std::polar(1.0, -es.eigenvalues()[i] * t) * c[i];
    return es.eigenvectors() * phased;
  }
};

}  // namespace

TEST_CASE("step-size precondition and norm accounting") {
  const PhaseGrid g(64);
  const JJParams p{1.0, 0.5, 0.0};
  const StateVector psi = gaussian_wavepacket(g, 0.0, 0.0, 0.3);
  CHECK(hamiltonian_norm_bound(g, p, 0.0) == doctest::Approx(0.5 * 32 * 32 + 1.0));
  CHECK_THROWS_AS(propagate(psi, g, p, 1.0, 0.1), ConfigError);
  CHECK_THROWS_AS(propagate(StateVector::normalized(Vector::Ones(32)), g, p, 1.0, 1e-3), DimensionError);
}

TEST_CASE("kinetic-only evolution: a charge eigenstate only acquires a phase") {
  const PhaseGrid g(32);
  const JJParams p{0.0, 0.2, 0.0};
  const StateVector psi(g.charge_states().col(g.charge_index(3)));
  PropagateOptions o;
  const EvolutionTrace tr = propagate(psi, g, p, 5.0, 5e-3, o);
  for (double n : tr.exp_n) CHECK(std::abs(n - 3.0) < 1e-12);
  const cplx overlap = psi.amplitudes().dot(tr.final_state.amplitudes());
  CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-12);
  CHECK(std::arg(overlap) == doctest::Approx(std::remainder(-0.2 * 9 * 5.0, 2 * kPi)).epsilon(1e-10));
}

TEST_CASE("split step tracks dense-eigendecomposition propagation at M = 64") {
  const PhaseGrid g(64);
  const JJParams p{1.0, 0.02, 0.0};
  const StateVector psi = gaussian_wavepacket(g, 0.15, 0.0, harmonic_width(p));
  const double dt = 5e-3, T = 60.0;
  PropagateOptions o;
  o.stride = 200;
  const EvolutionTrace tr = propagate(psi, g, p, T, dt, o);
  const DenseEvolution exact(build_hamiltonian(g, p, 0.0).entries());
  const Matrix cosphi = phase_function_operator(g, PhaseFunction::cosine()).entries();
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const Vector v = exact.at(psi.amplitudes(), tr.times[i]);
    worst = std::max(worst, std::abs(expectation(v, cosphi).real() - tr.exp_cosphi[i]));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("plasma frequency matches the dense 0-1 gap with its anharmonic shift") {
  // First anharmonic correction of a cosine well with kinetic term E_C n^2: -E_C/4.
  for (double I : {0.0, 0.3}) {
    const JJParams p{1.0, 0.01, I};
    const PhaseGrid g(128);
    Eigen::SelfAdjointEigenSolver<Matrix> es(build_hamiltonian(g, JJParams{1.0, 0.01, 0.0}, 0.0).entries());
    if (I == 0.0) {
      const double gap = es.eigenvalues()[1] - es.eigenvalues()[0];
      CHECK(gap == doctest::Approx(plasma_frequency(p) - p.EC / 4).epsilon(2e-3));
    }
    CHECK(plasma_frequency(p) == doctest::Approx(std::sqrt(2 * 0.01 * std::cos(std::asin(I)))));
    CHECK(harmonic_width(p) == doctest::Approx(std::pow(0.01 / (2 * std::cos(std::asin(I))), 0.25)));
  }
}

TEST_CASE("unitarity over a biased trajectory") {
  const PhaseGrid g(128);
  const JJParams p{1.0, 0.04, 0.3};
  PropagateOptions o;
  o.deformation = Deformation(1.0);
  const EvolutionTrace tr = propagate(gaussian_wavepacket(g, 0.4, 0.0, 0.3), g, p, 20.0, 2e-3, o);
  double drift = 0.0;
  for (double n : tr.norm) drift = std::max(drift, std::abs(n - 1.0));
  CHECK(drift < 1e-10);
  for (std::size_t i = 0; i < tr.exp_qn.size(); ++i) CHECK(std::abs(tr.exp_qn[i]) <= 1.0 + 1e-12);
}

TEST_CASE("dt halving: three-point Richardson ratio of a second-order stepper") {
  const PhaseGrid g(128);
  const JJParams p{1.0, 0.04, 0.3};
  const StateVector psi = gaussian_wavepacket(g, 0.4, 0.0, 0.3);
  std::vector<EvolutionTrace> tr;
  for (double dt : {2e-3, 1e-3, 5e-4}) tr.push_back(propagate(psi, g, p, 5.0, dt));
  const double state = (tr[0].final_state.amplitudes() - tr[1].final_state.amplitudes()).norm() /
                       (tr[1].final_state.amplitudes() - tr[2].final_state.amplitudes()).norm();
  const double phi = (tr[0].exp_phi.back() - tr[1].exp_phi.back()) / (tr[1].exp_phi.back() - tr[2].exp_phi.back());
  CHECK(state >= 3.5);
  CHECK(state <= 4.5);
  CHECK(phi >= 3.5);
  CHECK(phi <= 4.5);
}

TEST_CASE("inner Heisenberg step: trivial cases") {
  const PhaseGrid g(64);
  const StateVector psi = gaussian_wavepacket(g, 0.3, 0.0, 0.4);
  CHECK(verify_inner_heisenberg(psi, g, JJParams{0.0, 0.04, 0.0}, Deformation(1.0), 2.0, 1e-3) <= 1e-8);
  CHECK(verify_inner_heisenberg(psi, g, JJParams{1.0, 0.04, 0.3}, Deformation(0.0), 2.0, 1e-3) == 0.0);
}

TEST_CASE("inner Heisenberg step: generic case and dt^2 convergence") {
  const PhaseGrid g(128);
  const JJParams p{1.0, 0.04, 0.3};
  const StateVector psi = gaussian_wavepacket(g, 0.4, 0.0, harmonic_width(p));
  const double a = verify_inner_heisenberg(psi, g, p, Deformation(1.0), 2.0, 2e-3);
  const double b = verify_inner_heisenberg(psi, g, p, Deformation(1.0), 2.0, 1e-3);
  CHECK(b <= 1e-5);
  CHECK(a / b == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("Ehrenfest at EJ/EC = 100, I = 0") {
  const PhaseGrid g(128);
  const JJParams p{1.0, 0.01, 0.0};
  const double T = 2 * kPi / plasma_frequency(p);
  const double w = harmonic_width(p);
  CHECK(ehrenfest_compare(gaussian_wavepacket(g, 0.05, 0.0, w), g, p, T, 5e-3).max_discrepancy <= 1e-2);
  CHECK(ehrenfest_compare(gaussian_wavepacket(g, 0.0, 0.0, w), g, p, T, 5e-3).max_discrepancy <= 1e-6);
}

TEST_CASE("Ehrenfest at EJ/EC = 100, I = 0.5: frozen bound and the anharmonic shift") {
  // The cubic term of the tilted well moves the quantum centre by
  // tan(phi_m) w^2 / 2; the packet oscillates about it while the classical
  // particle rests at phi_m, so the discrepancy is about twice the shift.
  const PhaseGrid g(128);
  const JJParams p{1.0, 0.01, 0.5};
  const double m = std::asin(0.5);
  const double w = harmonic_width(p);
  const double T = 2 * kPi / plasma_frequency(p);
  const EhrenfestReport r = ehrenfest_compare(gaussian_wavepacket(g, m, 0.0, w), g, p, T, 5e-3);
  CHECK(r.max_discrepancy <= 5e-2);
  const double shift = 0.5 * std::tan(m) * w * w;
  CHECK(r.max_discrepancy == doctest::Approx(2 * shift).epsilon(0.15));
  for (double c : r.classical_phi) CHECK(std::abs(c - m) < 1e-9);
}

TEST_CASE("Ehrenfest preconditions") {
  const PhaseGrid g(64);
  const JJParams weak{1.0, 0.1, 0.0};
  CHECK_THROWS_AS(ehrenfest_compare(gaussian_wavepacket(g, 0.0, 0.0, 0.4), g, weak, 1.0, 1e-3), ConfigError);
}
