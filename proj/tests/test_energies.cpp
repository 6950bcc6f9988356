#include "fluidlab/energies.hpp"

#include <doctest.h>

#include <cmath>

using namespace fluidlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("static ball in flat space") {
  const AffineEos eos(0.5, 1.3, 1.0);
  const RadialSolver S(SpacetimeChart::minkowski(), eos, 64, 1.0);
  const RadialState s = S.hydrostatic();
  const RadialEnergies en(S, s);
  const double vol = 4 * kPi / 3;
  // T^{tau tau} = eps = eps0 on the whole ball.
  CHECK(en.e0() == doctest::Approx(1.3 * vol).epsilon(1e-10));
  const EklParts e00 = en.e_kl(0, 0);
  // |V|^2 = sigma0 and the weight sqrt(sigma) / (-u^tau) = sqrt(sigma0).
  CHECK(e00.interior_v == doctest::Approx(0.5 * std::pow(eos.sigma0(), 1.5) * vol).epsilon(1e-10));
  CHECK(e00.boundary_skipped);
  CHECK(e00.boundary == 0.0);
  const EnergyBreakdown b = en.breakdown();
  CHECK(std::abs(b.K1) < 1e-20);
  CHECK(b.Ekl.size() == 6);
  CHECK(b.E1 == doctest::Approx(b.Ekl.at({0, 0}).total() + b.Ekl.at({1, 0}).total() + b.Ekl.at({0, 1}).total() +
                                b.K1 + b.EW1));
  CHECK(std::abs(b.Ekl.at({1, 0}).total()) < 1e-12);
  CHECK(std::abs(b.EW1) < 1e-20);
  CHECK(b.lambda == 0.0);
  const CoercivityReport c = en.coercivity(1);
  CHECK(c.norms < 1e-20);
  CHECK(c.ratio < 1e-12);
  CHECK_THROWS(en.e_kl(2, 1));
}

TEST_CASE("stiff fluid has no sigma term") {
  const AffineEos eos(1.0, 1.0, 1.0);
  const RadialSolver S(SpacetimeChart::harmonic_trap(0.1), eos, 64, 1.0);
  const RadialState s = S.perturbed(0.05);
  const RadialEnergies en(S, s);
  for (int k = 0; k <= 2; ++k)
    for (int l = 0; k + l <= 2; ++l) CHECK(en.e_kl(k, l).interior_sigma == 0.0);
}

TEST_CASE("energies of a perturbed trap ball are nonnegative") {
  const AffineEos eos(0.5, 1.0, 1.0);
  const RadialSolver S(SpacetimeChart::harmonic_trap(0.1), eos, 64, 1.0);
  RadialState s = S.perturbed(0.02);
  for (int i = 0; i < 30; ++i) S.step(s, S.cfl_dt(0.5));
  const RadialEnergies en(S, s);
  const EnergyBreakdown b = en.breakdown();
  CHECK(b.E0 > 0.0);
  for (const auto& [kl, parts] : b.Ekl) {
    CHECK(parts.interior_v >= 0.0);
    CHECK(parts.interior_sigma >= 0.0);
    CHECK(parts.boundary >= 0.0);
    CHECK_FALSE(parts.boundary_skipped);
  }
  CHECK(b.EW0 >= 0.0);
  CHECK(b.EW1 >= 0.0);
  CHECK(b.K1 >= 0.0);
  CHECK(b.K1 < 1e-12 * b.E1);
  CHECK(b.delta > 0.0);
  CHECK(b.lambda > 0.0);
  CHECK(b.lambda < 0.05);
  const CoercivityReport c = en.coercivity(1);
  CHECK(c.ratio > 0.0);
  CHECK(std::isfinite(c.ratio));
}

TEST_CASE("Q form") {
  const Mat3 I = Mat3::Identity();
  const double a[9] = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  const double b[9] = {-1, 0, 2, 1, 1, 1, 0, 3, -2};
  double dot = 0.0, aa = 0.0;
  for (int i = 0; i < 9; ++i) {
    dot += a[i] * b[i];
    aa += a[i] * a[i];
  }
  CHECK(qform(I, a, b, 2) == doctest::Approx(dot));
  CHECK(qform(I, a, b, 2) == doctest::Approx(qform(I, b, a, 2)));
  // gamma = I - n n with n = e_z kills every normal component.
  Mat3 P = I;
  P(2, 2) = 0.0;
  const double n[3] = {0, 0, 5};
  CHECK(qform(P, n, n, 1) == 0.0);
  CHECK(qform(P, a, a, 2) == doctest::Approx(1 + 4 + 16 + 25));
  CHECK(qform(P, a, a, 2) <= aa);
  const BallDomain dom(1.0);
  const QForm Q{&dom};
  const double t[3] = {1, 0, 0};
  CHECK(Q({1.0, 0.0, 0.0}, t, t, 1) == doctest::Approx(0.0).scale(1.0));
  CHECK(Q({0.0, 0.0, 0.0}, t, t, 1) == doctest::Approx(1.0));
}
