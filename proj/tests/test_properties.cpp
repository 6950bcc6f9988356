#include "fluidlab/analytic.hpp"
#include "fluidlab/boundary.hpp"
#include "fluidlab/energies.hpp"
#include "fluidlab/eos.hpp"
#include "fluidlab/evolve.hpp"
#include "fluidlab/fields.hpp"
#include "fluidlab/inequalities.hpp"

#include <doctest.h>

#include <cmath>

using namespace fluidlab;

TEST_CASE("extended projection is idempotent on the boundary collar and symmetric everywhere") {
  Rng rng(101);
  for (int i = 0; i < 50; ++i) {
    const double R = rng.uniform(0.5, 2.0);
    const BallDomain dom(R);
    const Vec3 x{rng.uniform(-R, R), rng.uniform(-R, R), rng.uniform(-R, R)};
    const Mat3 P = dom.proj_ext(x);
    CHECK((P - P.transpose()).norm() < 1e-14);
    // The eigenvalues are 1, 1 and 1 - chi, all in [0, 1], so Q is positive semidefinite.
    const Eigen::SelfAdjointEigenSolver<Mat3> es(P);
    CHECK(es.eigenvalues().minCoeff() >= -1e-14);
    CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-14);
    if (dom.chi(x) == 1.0) CHECK((P * P - P).norm() < 1e-12);
    const double a[3] = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    CHECK(qform(P, a, a, 1) >= -1e-14);
  }
}

TEST_CASE("symmetric plus antisymmetric recovers the tensor over two slots") {
  Rng rng(202);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> b(81);
    for (double& v : b) v = rng.uniform(-1, 1);
    const SymDecomposition d = sym_decompose(b, 4, 2);
    for (std::size_t j = 0; j < b.size(); ++j) CHECK(std::abs(d.S[j] + d.A[j] - b[j]) < 1e-14);
  }
}

TEST_CASE("norms are absolutely homogeneous") {
  const SpacetimeChart c = SpacetimeChart::harmonic_trap(0.2);
  const SampleSet b = ball_gauss(1.0, 4, 4, 8);
  Rng rng(303);
  for (int i = 0; i < 5; ++i) {
    const AnalyticScalar f = random_scalar(rng, i);
    const double s = rng.uniform(-3, 3);
    const TensorFn F = scalar_field([&](const Vec4& e) { return f({e[1], e[2], e[3]}); });
    const TensorFn G = scalar_field([&](const Vec4& e) { return s * f({e[1], e[2], e[3]}); });
    CHECK(sobolev_norm(c, b, G, 1) == doctest::Approx(std::abs(s) * sobolev_norm(c, b, F, 1)).epsilon(1e-10));
  }
}

TEST_CASE("equation of state round trips for random parameters") {
  Rng rng(404);
  for (int i = 0; i < 30; ++i) {
    const AffineEos eos(rng.uniform(0.05, 1.0), rng.uniform(0.1, 5.0), rng.uniform(0.1, 5.0));
    const double s = eos.sigma0() * rng.uniform(1.0, 20.0);
    CHECK(eos.sigma_from_p(eos.p(s)) == doctest::Approx(s).epsilon(1e-10));
    CHECK(eos.sigma_from_eps(eos.eps(s)) == doctest::Approx(s).epsilon(1e-10));
    CHECK(eos.de(s) >= 0.0);
    CHECK(eos.de(s) <= validate_assumptions(eos, eos.sigma0(), 20 * eos.sigma0()).e_sup_bound + 1e-12);
  }
}

TEST_CASE("random perturbations: reversibility, constraint and positive energies") {
  Rng rng(505);
  for (int i = 0; i < 4; ++i) {
    const double k = rng.uniform(0.0, 0.3);
    const AffineEos eos(rng.uniform(0.2, 1.0), 1.0, 1.0);
    const RadialSolver S(SpacetimeChart::harmonic_trap(k), eos, 32, 1.0);
    RadialState s = S.perturbed(rng.uniform(-0.05, 0.05), 1 + rng.integer(2));
    for (int j = 0; j < 10; ++j) S.step(s, S.cfl_dt(0.5));
    CHECK(S.constraint_violation(s) <= 1e-8);
    const RadialState s0 = s;
    const double dt = S.cfl_dt(0.5);
    S.step(s, dt);
    S.step(s, -dt);
    for (std::size_t j = 0; j < s.nodes(); ++j) CHECK(std::abs(s.sigma[j] - s0.sigma[j]) < 1e-8);
    const EnergyBreakdown b = RadialEnergies(S, s0).breakdown();
    CHECK(b.E0 > 0.0);
    for (const auto& [kl, p] : b.Ekl) CHECK(p.total() >= 0.0);
    CHECK(b.EW1 >= 0.0);
  }
}

TEST_CASE("empirical constants are stable under quadrature refinement") {
  for (const char* s : {"poin", "poin2", "intsob1"}) {
    VerifyOptions coarse;
    coarse.instances = 5;
    VerifyOptions fine = coarse;
    fine.resolution = 2;
    const auto a = run_suite(s, coarse);
    const auto b = run_suite(s, fine);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double ratio = a[i].empirical_constant / b[i].empirical_constant;
      CHECK(ratio < 2.0);
      CHECK(ratio > 0.5);
    }
  }
}
