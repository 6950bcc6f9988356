#include "fluidlab/boundary.hpp"
#include "fluidlab/evolve.hpp"
#include "fluidlab/fields.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace fluidlab;

namespace {

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("hydrostatic profiles") {
  const AffineEos eos(0.5, 1.0, 1.0);
  const RadialSolver M(SpacetimeChart::minkowski(), eos, 64, 1.0);
  const RadialState m = M.hydrostatic();
  for (std::size_t j = 0; j < m.nodes(); ++j) {
    CHECK(m.sigma[j] == doctest::Approx(eos.sigma0()));
    CHECK(m.Vr[j] == 0.0);
  }
  const RadialSolver T(SpacetimeChart::harmonic_trap(0.2), eos, 64, 1.0);
  const RadialState t = T.hydrostatic();
  CHECK(eos.p(t.sigma[0]) > 0.0);
  for (std::size_t j = 1; j < t.nodes(); ++j) CHECK(eos.p(t.sigma[j]) < eos.p(t.sigma[j - 1]));
  CHECK(t.sigma.back() == eos.sigma0());
  // The equilibrium satisfies the discrete constraints exactly; the wave
  // residual is the O(h^2) consistency error of the profile.
  const ResidualReport r = T.residuals(t);
  CHECK(r.wave <= 1e-3);
  CHECK(r.constraint <= 1e-10);
  CHECK(r.boundary_p <= 1e-10);
  CHECK(r.normal_velocity <= 1e-10);
  CHECK(r.sdiv_gap <= 1e-10);
  CHECK(T.volume_ode(t) == doctest::Approx(T.volume_mesh(t)));
}

TEST_CASE("boundary and regularity conditions hold along a run") {
  const AffineEos eos(0.5, 1.0, 1.0);
  const RadialSolver S(SpacetimeChart::harmonic_trap(0.1), eos, 64, 1.0);
  RadialState s = S.perturbed(0.05);
  for (int i = 0; i < 100; ++i) {
    S.step(s, S.cfl_dt(0.5));
    CHECK(std::abs(s.sigma.back() - eos.sigma0()) <= 1e-8);
    CHECK(s.Vr[0] == 0.0);
    CHECK(S.constraint_violation(s) <= 1e-8);
    CHECK(std::is_sorted(s.x.begin(), s.x.end()));
  }
}

TEST_CASE("time reversal") {
  const RadialSolver S(SpacetimeChart::harmonic_trap(0.1), AffineEos(0.5, 1.0, 1.0), 64, 1.0);
  RadialState s = S.perturbed(0.05);
  for (int i = 0; i < 20; ++i) S.step(s, S.cfl_dt(0.5));
  const RadialState s0 = s;
  const double dt = S.cfl_dt(0.5);
  S.step(s, dt);
  S.step(s, -dt);
  // RK4 is reversible up to its local truncation error.
  CHECK(max_diff(s.x, s0.x) <= 1e-8);
  CHECK(max_diff(s.sigma, s0.sigma) <= 1e-8);
  CHECK(max_diff(s.Vr, s0.Vr) <= 1e-8);
}

TEST_CASE("stiff oscillation frequency matches the linearized acoustic mode") {
  // Linearized about the uniform ball the enthalpy obeys the wave equation
  // with eta = 1 and p = 0 at r = R: the fundamental is sinc(pi r / R) at
  // angular frequency pi, so the center value crosses sigma0 every half period 1.
  const AffineEos eos(1.0, 1.0, 1.0);
  const RadialSolver S(SpacetimeChart::minkowski(), eos, 100, 1.0);
  RadialState s = S.perturbed(1e-3);
  const double dt = S.cfl_dt(0.5);
  double prev = s.sigma[0] - eos.sigma0();
  std::vector<double> zc;
  while (s.t < 4.6) {
    const double t0 = s.t;
    S.step(s, dt);
    const double c = s.sigma[0] - eos.sigma0();
    if (prev * c < 0.0) zc.push_back(t0 + dt * prev / (prev - c));
    prev = c;
  }
  REQUIRE(zc.size() >= 4);
  const double period = 2.0 * (zc.back() - zc.front()) / static_cast<double>(zc.size() - 1);
  CHECK(period == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("wave residual converges at second order in h") {
  std::vector<double> hs, res;
  for (int n : {50, 100, 200}) {
    const RadialSolver S(SpacetimeChart::harmonic_trap(0.1), AffineEos(0.5, 1.0, 1.0), n, 1.0);
    RadialState s = S.perturbed(1e-2);
    const double dt = 0.034 / 10;
    for (int i = 0; i < 10; ++i) S.step(s, dt);
    hs.push_back(1.0 / n);
    res.push_back(S.residuals(s).wave);
  }
  CHECK(fit_order(hs, res) >= 1.9);
}

TEST_CASE("failures are reported") {
  const RadialSolver S(SpacetimeChart::harmonic_trap(0.1), AffineEos(0.5, 1.0, 1.0), 40, 1.0);
  RadialState s = S.perturbed(0.45);
  CHECK_THROWS(
      [&] {
        for (int i = 0; i < 20; ++i) S.step(s, 0.2);
      }());
  CHECK_THROWS_AS(RadialSolver(SpacetimeChart::minkowski(), AffineEos(0.5, 1.0, 1.0), 7, 1.0), ConfigError);
}
