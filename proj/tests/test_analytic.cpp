#include "fluidlab/analytic.hpp"

#include <doctest.h>

#include <cmath>

using namespace fluidlab;

TEST_CASE("exact partials agree with finite differences") {
  Rng rng(11);
  for (int variant = 0; variant < 4; ++variant) {
    const AnalyticScalar f = random_scalar(rng, variant);
    const Vec3 x{0.2, -0.3, 0.4};
    const double h = 1e-5;
    for (int i = 0; i < 3; ++i) {
      Vec3 p = x, m = x;
      p[i] += h;
      m[i] -= h;
      std::array<int, 3> n{0, 0, 0};
      n[i] = 1;
      CHECK(f.partial(x, n) == doctest::Approx((f(p) - f(m)) / (2 * h)).epsilon(1e-6));
    }
    std::vector<double> D[3];
    f.jet(x, 2, D);
    CHECK(D[0][0] == doctest::Approx(f(x)));
    CHECK(D[2].size() == 9);
    // Mixed partials commute.
    CHECK(D[2][1] == doctest::Approx(D[2][3]));
    CHECK(D[2][5] == doctest::Approx(D[2][7]));
    CHECK(std::abs(f(x)) <= f.coefficient_l1() + 1e-12);
  }
}

TEST_CASE("polynomial algebra") {
  const AnalyticScalar p = AnalyticScalar::polynomial({{2.0, {2, 0, 0}}, {-1.0, {0, 1, 1}}});
  const Vec3 x{1.5, 2.0, -1.0};
  CHECK(p(x) == doctest::Approx(2 * 2.25 + 2.0));
  CHECK(p.partial(x, {2, 0, 0}) == doctest::Approx(4.0));
  CHECK(p.partial(x, {0, 1, 1}) == doctest::Approx(-1.0));
  CHECK(p.partial(x, {3, 0, 0}) == 0.0);
  AnalyticScalar q = p.scaled(-2.0);
  q += p;
  CHECK(q(x) == doctest::Approx(-p(x)));
  const AnalyticScalar r = p.times_polynomial({{1.0, {0, 0, 1}}});
  CHECK(r(x) == doctest::Approx(p(x) * x[2]));
}

TEST_CASE("rng determinism and ranges") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform(-2.0, 3.0);
    CHECK(u == b.uniform(-2.0, 3.0));
    CHECK(u >= -2.0);
    CHECK(u < 3.0);
    if (u != c.uniform(-2.0, 3.0)) differs = true;
    const int k = a.integer(7);
    b.integer(7);
    c.integer(7);
    CHECK(k >= 0);
    CHECK(k < 7);
  }
  CHECK(differs);
}

TEST_CASE("dirichlet scalars vanish on the sphere with a positive normal derivative") {
  Rng rng(5);
  const double R = 1.3;
  const AnalyticScalar q = dirichlet_scalar(rng, R);
  for (const Vec3& n : {Vec3{1, 0, 0}, Vec3{0, -1, 0}, Vec3{0.6, 0.0, 0.8}}) {
    const Vec3 x{R * n[0], R * n[1], R * n[2]};
    CHECK(std::abs(q(x)) < 1e-12);
    double dn = 0.0;
    for (int i = 0; i < 3; ++i) {
      std::array<int, 3> e{0, 0, 0};
      e[i] = 1;
      dn += n[i] * q.partial(x, e);
    }
    CHECK(dn >= 1.4 * R - 1e-12);
  }
}

TEST_CASE("slot indexing") {
  CHECK(pow3i(0) == 1);
  CHECK(pow3i(3) == 27);
  // flat index 5 of rank 2 is the slot pair (y, z)
  const std::array<int, 3> c = slot_counts(5, 2);
  CHECK(c[0] == 0);
  CHECK(c[1] == 1);
  CHECK(c[2] == 1);
}
