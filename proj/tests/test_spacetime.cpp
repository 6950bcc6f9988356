#include "fluidlab/spacetime.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace fluidlab;

namespace {

std::vector<Vec4> events() {
  return {{0.0, 0.0, 0.0, 0.0}, {0.3, 0.4, -0.2, 0.1}, {1.0, 0.9, 0.3, -0.5}, {-2.0, -0.1, 0.7, 0.6}};
}

// Oracle: Christoffels from central differences of the metric components.
double christoffel_fd(const SpacetimeChart& c, const Vec4& e, int b, int a, int n, double h) {
  auto dg = [&](int m, int i, int j) {
    Vec4 p = e, q = e;
    p[m] += h;
    q[m] -= h;
    return (c.metric(p)(i, j) - c.metric(q)(i, j)) / (2 * h);
  };
  const Mat4 gi = c.inverse_metric(e);
  double s = 0.0;
  for (int d = 0; d < 4; ++d) s += 0.5 * gi(b, d) * (dg(a, d, n) + dg(n, d, a) - dg(d, a, n));
  return s;
}

}  // namespace

TEST_CASE("minkowski frame and curvature vanish") {
  const SpacetimeChart c = SpacetimeChart::minkowski();
  for (const Vec4& e : events()) {
    const FoliationFrame f = frame_at(c, e);
    CHECK(f.tau_upper[0] == doctest::Approx(1.0));
    CHECK(f.tau_lower[0] == doctest::Approx(-1.0));
    const Christoffel G = c.christoffel(e);
    const Riemann R = c.riemann(e);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int d = 0; d < 4; ++d) {
          CHECK(G.G[a][b][d] == 0.0);
          for (int m = 0; m < 4; ++m) CHECK(R.R[a][b][d][m] == 0.0);
        }
  }
  const CurvatureReport r = curvature_report(c, events());
  CHECK(r.R == doctest::Approx(0.0));
}

TEST_CASE("trap frame normal is the normalized time gradient") {
  const double k = 0.3;
  const SpacetimeChart c = SpacetimeChart::harmonic_trap(k);
  for (const Vec4& e : events()) {
    const double r2 = e[1] * e[1] + e[2] * e[2] + e[3] * e[3];
    const double phi = 0.5 * k * r2;
    const FoliationFrame f = frame_at(c, e);
    CHECK(f.tau_upper[0] == doctest::Approx(1.0 / std::sqrt(1.0 + 2.0 * phi)).epsilon(1e-14));
    for (int i = 1; i < 4; ++i) CHECK(f.tau_upper[i] == 0.0);
    double tt = 0.0;
    for (int a = 0; a < 4; ++a) tt += f.tau_upper[a] * f.tau_lower[a];
    CHECK(std::abs(tt + 1.0) < 1e-12);
    // gbar tau = 0 and Pi is idempotent.
    const Eigen::Vector4d tu(f.tau_upper[0], f.tau_upper[1], f.tau_upper[2], f.tau_upper[3]);
    CHECK((f.gbar_lower * tu).norm() < 1e-12);
    CHECK((f.spatial_proj * f.spatial_proj - f.spatial_proj).norm() < 1e-12);
    CHECK(lorentzian_signature(f.g_lower));
  }
}

TEST_CASE("trap christoffels match finite differences of the metric at second order") {
  const SpacetimeChart c = SpacetimeChart::harmonic_trap(0.2);
  const Vec4 e{0.1, 0.5, -0.3, 0.4};
  const Christoffel G = c.christoffel(e);
  double err[2] = {0.0, 0.0};
  const double hs[2] = {1e-2, 5e-3};
  for (int s = 0; s < 2; ++s)
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a)
        for (int n = 0; n < 4; ++n) {
          CHECK(G.G[b][a][n] == doctest::Approx(G.G[b][n][a]));
          err[s] = std::max(err[s], std::abs(G.G[b][a][n] - christoffel_fd(c, e, b, a, n, hs[s])));
        }
  // The metric is quadratic in x, so central differences are exact up to rounding.
  CHECK(err[0] < 1e-9);
  CHECK(err[1] < 1e-9);
  // Gamma^i_00 = d_i phi.
  CHECK(G.G[1][0][0] == doctest::Approx(0.2 * 0.5));
}

TEST_CASE("trap riemann satisfies the first bianchi identity") {
  const SpacetimeChart c = SpacetimeChart::harmonic_trap(0.5);
  for (const Vec4& e : events()) {
    const Riemann R = c.riemann(e);
    double worst = 0.0;
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b)
            worst = std::max(worst, std::abs(R.R[m][n][a][b] + R.R[n][a][m][b] + R.R[a][m][n][b]));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("trap with k = 0 coincides with minkowski") {
  const SpacetimeChart a = SpacetimeChart::harmonic_trap(0.0), b = SpacetimeChart::minkowski();
  for (const Vec4& e : events()) CHECK((a.metric(e) - b.metric(e)).norm() == 0.0);
  CHECK_THROWS(SpacetimeChart::harmonic_trap(-1.0));
}
