#include "fluidlab/fields.hpp"

#include <doctest.h>

#include <cmath>

using namespace fluidlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

double r2(const Vec4& e) { return e[1] * e[1] + e[2] * e[2] + e[3] * e[3]; }

}  // namespace

TEST_CASE("spatial derivatives of polynomials in flat space") {
  const SpacetimeChart c = SpacetimeChart::minkowski();
  const Vec4 e{0.0, 0.3, -0.2, 0.5};
  const VectorFn X = [](const Vec4& p) { return Vec4{0.0, p[1], p[2], p[3]}; };
  CHECK(sdiv(c, X, e) == doctest::Approx(3.0).epsilon(1e-10));
  const ScalarFn q = [](const Vec4& p) { return 1.0 - r2(p); };
  const Vec4 g = spatial_gradient(c, q, e);
  for (int i = 1; i < 4; ++i) CHECK(g[i] == doctest::Approx(-2.0 * e[i]).epsilon(1e-10));
  CHECK(laplace_beltrami(c, q, e) == doctest::Approx(-6.0).epsilon(1e-8));
  CHECK(std::abs(laplace_beltrami(c, [](const Vec4& p) { return p[1]; }, e)) < 1e-8);
}

TEST_CASE("curl of a rotation and of a gradient") {
  const SpacetimeChart c = SpacetimeChart::minkowski();
  const Vec4 e{0.0, 0.2, 0.4, -0.1};
  const VectorFn rot = [](const Vec4& p) { return Vec4{0.0, -p[2], p[1], 0.0}; };
  const Mat4 w = scurl(c, rot, e);
  // (curl X)_{12} = d_1 zeta_2 - d_2 zeta_1 = 1 - (-1)
  CHECK(w(1, 2) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(w(2, 1) == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(std::abs(w(1, 3)) < 1e-10);
  CHECK(std::abs(w(2, 3)) < 1e-10);
  const VectorFn grad_phi = [](const Vec4& p) {
    // phi = x y^2 + z^3, raised with the Minkowski metric
    return Vec4{0.0, p[2] * p[2], 2 * p[1] * p[2], 3 * p[3] * p[3]};
  };
  CHECK(curl4(c, grad_phi, e).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("trap laplace-beltrami of 1 - r^2 matches the direct expansion") {
  // The trap slices are flat: gbar^{ij} = delta and the spatial Christoffels
  // vanish, so the oracle is the Euclidean Laplacian.
  const SpacetimeChart c = SpacetimeChart::harmonic_trap(0.2);
  const ScalarFn q = [](const Vec4& p) { return 1.0 - r2(p); };
  for (const Vec4& e : {Vec4{0, 0.1, 0.2, 0.3}, Vec4{1, -0.5, 0.4, 0.0}})
    CHECK(laplace_beltrami(c, q, e) == doctest::Approx(-6.0).epsilon(1e-6));
  CHECK(std::abs(spatial_gradient(c, [](const Vec4&) { return 2.0; }, Vec4{0, 0.1, 0.2, 0.3})[1]) < 1e-12);
}

TEST_CASE("tau derivative through the velocity split for a boost") {
  const SpacetimeChart c = SpacetimeChart::minkowski();
  const double a = 0.4;
  const VectorFn u = [a](const Vec4&) { return Vec4{std::cosh(a), std::sinh(a), 0.0, 0.0}; };
  const ScalarFn F = [](const Vec4& p) { return p[1]; };
  const Vec4 e{0.0, 0.1, 0.2, 0.3};
  // tau = d_t, so nabla_tau x^1 = 0 even though nabla_u x^1 = sinh a.
  CHECK(std::abs(tau_derivative(c, F, u, e)) < 1e-8);
  CHECK(material_derivative(F, u(e), e) == doctest::Approx(std::sinh(a)).epsilon(1e-10));
  const VelocitySplit sp = split_velocity(c, u(e), e);
  CHECK(sp.lambda == doctest::Approx(std::tanh(a)).epsilon(1e-12));
  const VelocitySplit st = split_velocity(c, Vec4{1, 0, 0, 0}, e);
  CHECK(st.lambda == 0.0);
  CHECK_THROWS_AS(check_velocity(c, Vec4{0.5, 0, 0, 0}, e), InvalidVelocity);
}

TEST_CASE("sdiv identity on a moving field in both charts") {
  for (const SpacetimeChart& c : {SpacetimeChart::minkowski(), SpacetimeChart::harmonic_trap(0.3)}) {
    const VectorFn V = [](const Vec4& p) {
      return Vec4{1.0 + 0.1 * p[1] * p[2], 0.2 * p[0] * p[1], 0.3 * p[3] * p[3], -0.1 * p[2]};
    };
    const Vec4 e{0.2, 0.3, -0.4, 0.5};
    const FoliationFrame f = frame_at(c, e);
    const Mat4 D = nabla_vector(c, V, e);
    // tau_mu nabla_tau V^mu
    double ttv = 0.0;
    for (int m = 0; m < 4; ++m)
      for (int a = 0; a < 4; ++a) ttv += f.tau_lower[m] * f.tau_upper[a] * D(a, m);
    CHECK(sdiv(c, V, e) == doctest::Approx(divergence(c, V, e) + ttv).epsilon(1e-8));
  }
}

TEST_CASE("sample sets and norms") {
  const SampleSet b = ball_gauss(1.0, 8, 8, 16);
  CHECK(b.total_weight() == doctest::Approx(4 * kPi / 3).epsilon(1e-12));
  const SampleSet s = sphere_grid(2.0, 8, 16);
  CHECK(s.total_weight() == doctest::Approx(16 * kPi).epsilon(1e-12));
  for (double w : b.weights) CHECK(w > 0.0);
  // ||c|| = |c| sqrt(4 pi / 3)
  CHECK(l2_norm(b, [](const Vec4&) { return -3.0; }) == doctest::Approx(3.0 * std::sqrt(4 * kPi / 3)));
  // q = 1 - r^2: ||q||^2 = 32 pi / 105, ||grad q||^2 = 16 pi / 5.
  const SpacetimeChart c = SpacetimeChart::minkowski();
  const TensorFn q = scalar_field([](const Vec4& p) { return 1.0 - r2(p); });
  CHECK(l2_norm(b, [&](const Vec4& e) { return std::abs(q(e).c[0]); }) ==
        doctest::Approx(std::sqrt(32 * kPi / 105)).epsilon(1e-10));
  const double h1 = sobolev_norm(c, b, q, 1);
  CHECK(h1 == doctest::Approx(std::sqrt(32 * kPi / 105) + std::sqrt(16 * kPi / 5)).epsilon(1e-6));
  // Homogeneity and the l = 0 mixed norm.
  const TensorFn q3 = scalar_field([](const Vec4& p) { return -3.0 * (1.0 - r2(p)); });
  CHECK(sobolev_norm(c, b, q3, 1) == doctest::Approx(3.0 * h1).epsilon(1e-12));
  const VectorFn u = [](const Vec4&) { return Vec4{1, 0, 0, 0}; };
  CHECK(mixed_norm(c, b, q, u, 1, 0).value == doctest::Approx(h1).epsilon(1e-12));
  CHECK_THROWS(radial_grid(7, 1.0));
}
