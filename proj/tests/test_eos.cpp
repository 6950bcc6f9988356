#include "fluidlab/eos.hpp"

#include <doctest.h>

#include <cmath>

using namespace fluidlab;

TEST_CASE("stiff model closed forms") {
  const AffineEos eos(1.0, 1.0, 1.0);
  CHECK(eos.sigma0() == doctest::Approx(1.0));
  CHECK(eos.rho0() == doctest::Approx(1.0));
  // sigma = 4: rho = 2, eps = 2.5, p = 1.5.
  const Thermo t = eos.thermo(4.0);
  CHECK(t.rho == doctest::Approx(2.0));
  CHECK(t.eps == doctest::Approx(2.5));
  CHECK(t.p == doctest::Approx(1.5));
  CHECK((t.eps + t.p) / t.rho == doctest::Approx(2.0));
  for (double s : {0.6, 1.0, 3.0, 9.0}) CHECK(eos.de(s) == 0.0);
}

TEST_CASE("e' identity by direct formula") {
  const AffineEos eos(0.5, 1.0, 1.0);
  CHECK(eos.de(1.0) == doctest::Approx(0.5));
}

TEST_CASE("thermodynamic round trips") {
  for (double c2 : {0.2, 0.5, 1.0}) {
    const AffineEos eos(c2, 1.3, 0.7);
    const double s0 = eos.sigma0();
    CHECK(eos.p(s0) == doctest::Approx(0.0).epsilon(1e-14));
    double prev = -1e300;
    for (int i = 0; i <= 40; ++i) {
      const double s = s0 * (0.5 + 9.5 * i / 40.0);
      const Thermo t = eos.thermo(s);
      CHECK(std::sqrt(s) * t.rho == doctest::Approx(t.eps + t.p).epsilon(1e-10));
      CHECK(eos.sigma_from_p(t.p) == doctest::Approx(s).epsilon(1e-10));
      CHECK(eos.sigma_from_rho(t.rho) == doctest::Approx(s).epsilon(1e-10));
      CHECK(eos.sigma_from_eps(t.eps) == doctest::Approx(s).epsilon(1e-10));
      CHECK(t.p > prev);
      CHECK(eos.dsigma_dp(s) > 0.0);
      prev = t.p;
      // e(sigma) = log(rho / sqrt(sigma))
      CHECK(eos.e(s) == doctest::Approx(std::log(t.rho / std::sqrt(s))).epsilon(1e-12));
      CHECK(de_numeric(eos, s) == doctest::Approx(eos.de(s)).epsilon(1e-8));
    }
  }
}

TEST_CASE("assumption reports") {
  const AffineEos eos(0.25, 1.0, 1.0);
  const EosReport r = validate_assumptions(eos, eos.sigma0(), 4 * eos.sigma0());
  CHECK(r.L2 == doctest::Approx(0.25));
  CHECK(r.L1 == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(r.all_pass);
  const AffineEos stiff(1.0, 1.0, 1.0);
  const EosReport rs = validate_assumptions(stiff, stiff.sigma0(), 4 * stiff.sigma0());
  CHECK(rs.e_sup_bound == doctest::Approx(0.0));
  CHECK(rs.all_pass);
}

TEST_CASE("parameters outside the assumptions are rejected") {
  CHECK_THROWS_AS(AffineEos(1.5, 1.0, 1.0), AssumptionViolation);
  CHECK_THROWS_AS(AffineEos(0.0, 1.0, 1.0), AssumptionViolation);
  CHECK_THROWS_AS(AffineEos(0.5, -1.0, 1.0), AssumptionViolation);
  CHECK_THROWS_AS(AffineEos(0.5, 1.0, 0.0), AssumptionViolation);
  const AffineEos eos(0.5, 1.0, 1.0);
  CHECK_THROWS_AS(eos.check_sigma(0.1 * eos.sigma0()), AssumptionViolation);
}
