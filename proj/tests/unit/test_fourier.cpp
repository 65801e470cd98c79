#include <doctest.h>

#include "generators.hpp"
#include "qdeform/fourier.hpp"

using namespace qdeform;
using qdeform::testing::Gen;

TEST_CASE("fast charge transform matches the dense basis change") {
  Gen gen(31);
  for (int M : {8, 16, 64, 256, 96}) {
    const PhaseGrid g(M);
    const ChargeTransform T(g);
    for (int i = 0; i < 4; ++i) {
      const Vector psi = gen.state(M);
      Vector c, back;
      T.to_charge(psi, c);
      CHECK((c - g.charge_states().adjoint() * psi).cwiseAbs().maxCoeff() < 1e-13);
      T.to_grid(c, back);
      CHECK((back - psi).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("charge eigenstates transform to unit vectors") {
  const PhaseGrid g(32);
  const ChargeTransform T(g);
  for (int n : {-16, -1, 0, 5, 15}) {
    Vector c;
    T.to_charge(g.charge_states().col(g.charge_index(n)), c);
    for (int m = 0; m < g.size(); ++m) {
      CHECK(std::abs(c[m] - (m == g.charge_index(n) ? 1.0 : 0.0)) < 1e-13);
    }
  }
}
