#include "fluidlab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>

namespace fluidlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double SampleSet::total_weight() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre needs at least one node");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

SampleSet radial_grid(int n, double R) {
  if (n < 8) throw ConfigError("radial grid needs at least 8 intervals");
  SampleSet s;
  s.kind = SampleKind::RadialGrid;
  s.radius = R;
  s.h = R / n;
  const bool simpson = n % 2 == 0;
  for (int i = 0; i <= n; ++i) {
    const double r = s.h * i;
    double c;
    if (simpson) c = (i == 0 || i == n) ? 1.0 / 3.0 : (i % 2 ? 4.0 / 3.0 : 2.0 / 3.0);
    else c = (i == 0 || i == n) ? 0.5 : 1.0;
    s.points.push_back({0.0, r, 0.0, 0.0});
    s.weights.push_back(c * s.h * 4.0 * kPi * r * r);
    s.boundary.push_back(i == n);
  }
  return s;
}

SampleSet ball_lattice(double R, double h) {
  if (!(h > 0.0 && R > 0.0)) throw ConfigError("ball lattice needs R > 0 and h > 0");
  SampleSet s;
  s.kind = SampleKind::BallLattice;
  s.radius = R;
  s.h = h;
  const int m = static_cast<int>(std::floor(R / h));
  for (int i = -m; i <= m; ++i)
    for (int j = -m; j <= m; ++j)
      for (int k = -m; k <= m; ++k) {
        const double x = i * h, y = j * h, z = k * h;
        if (x * x + y * y + z * z > R * R) continue;
        s.points.push_back({0.0, x, y, z});
        s.weights.push_back(h * h * h);
        s.boundary.push_back(0);
      }
  return s;
}

SampleSet ball_gauss(double R, int nr, int ntheta, int nphi) {
  SampleSet s;
  s.kind = SampleKind::BallGauss;
  s.radius = R;
  std::vector<double> xr, wr, xt, wt;
  gauss_legendre(nr, xr, wr);
  gauss_legendre(ntheta, xt, wt);
  const double dphi = 2.0 * kPi / nphi;
  for (int i = 0; i < nr; ++i) {
    const double r = 0.5 * R * (xr[i] + 1.0);
    const double wrr = 0.5 * R * wr[i] * r * r;
    for (int j = 0; j < ntheta; ++j) {
      const double ct = xt[j], st = std::sqrt(1.0 - ct * ct);
      for (int k = 0; k < nphi; ++k) {
        const double ph = (k + 0.5) * dphi;
        s.points.push_back({0.0, r * st * std::cos(ph), r * st * std::sin(ph), r * ct});
        s.weights.push_back(wrr * wt[j] * dphi);
        s.boundary.push_back(0);
      }
    }
  }
  s.h = R / nr;
  return s;
}

SampleSet sphere_grid(double R, int ntheta, int nphi) {
  SampleSet s;
  s.kind = SampleKind::SphereGrid;
  s.radius = R;
  std::vector<double> xt, wt;
  gauss_legendre(ntheta, xt, wt);
  const double dphi = 2.0 * kPi / nphi;
  for (int j = 0; j < ntheta; ++j) {
    const double ct = xt[j], st = std::sqrt(1.0 - ct * ct);
    for (int k = 0; k < nphi; ++k) {
      const double ph = (k + 0.5) * dphi;
      s.points.push_back({0.0, R * st * std::cos(ph), R * st * std::sin(ph), R * ct});
      s.weights.push_back(R * R * wt[j] * dphi);
      s.boundary.push_back(1);
    }
  }
  s.h = R * kPi / ntheta;
  return s;
}

TensorFn scalar_field(ScalarFn f) {
  return [f = std::move(f)](const Vec4& e) { return Tensor::scalar(f(e)); };
}

TensorFn vector_field(VectorFn f) {
  return [f = std::move(f)](const Vec4& e) { return Tensor::vector(f(e)); };
}

namespace {

template <class F>
auto stencil4(const F& f, const Vec4& e, int m, double h) {
  Vec4 p1 = e, p2 = e, m1 = e, m2 = e;
  p1[m] += h;
  p2[m] += 2 * h;
  m1[m] -= h;
  m2[m] -= 2 * h;
  return std::make_tuple(f(p2), f(p1), f(m1), f(m2));
}

// Matrix (mu, nu) = d_mu X^nu
Mat4 partial_vector(const VectorFn& X, const Vec4& e, double h) {
  Mat4 d;
  for (int m = 0; m < 4; ++m) {
    const auto [p2, p1, m1, m2] = stencil4(X, e, m, h);
    for (int n = 0; n < 4; ++n) d(m, n) = (-p2[n] + 8 * p1[n] - 8 * m1[n] + m2[n]) / (12 * h);
  }
  return d;
}

Vec4 lower(const Mat4& g, const Vec4& v) {
  Vec4 out{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out[a] += g(a, b) * v[b];
  return out;
}

}  // namespace

Vec4 gradient(const ScalarFn& f, const Vec4& e, double h) {
  Vec4 g{};
  for (int m = 0; m < 4; ++m) {
    const auto [p2, p1, m1, m2] = stencil4(f, e, m, h);
    g[m] = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h);
  }
  return g;
}

Mat4 nabla_vector(const SpacetimeChart& chart, const VectorFn& X, const Vec4& e, double h) {
  Mat4 d = partial_vector(X, e, h);
  const Christoffel G = chart.christoffel(e);
  const Vec4 x = X(e);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      for (int l = 0; l < 4; ++l) d(m, n) += G.G[n][m][l] * x[l];
  return d;
}

double divergence(const SpacetimeChart& chart, const VectorFn& X, const Vec4& e, double h) {
  // (1/sqrt|g|) d_mu (sqrt|g| X^mu)
  auto vol = [&](const Vec4& p) { return std::sqrt(std::abs(chart.metric(p).determinant())); };
  double s = 0.0;
  for (int m = 0; m < 4; ++m) {
    auto comp = [&](const Vec4& p) { return vol(p) * X(p)[m]; };
    const auto [p2, p1, m1, m2] = stencil4(comp, e, m, h);
    s += (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h);
  }
  return s / vol(e);
}

Mat4 curl4(const SpacetimeChart& chart, const VectorFn& X, const Vec4& e, double h) {
  VectorFn zeta = [&](const Vec4& p) { return lower(chart.metric(p), X(p)); };
  const Mat4 d = partial_vector(zeta, e, h);
  return d - d.transpose();
}

Mat4 scurl(const SpacetimeChart& chart, const VectorFn& X, const Vec4& e, double h) {
  VectorFn zeta = [&](const Vec4& p) { return lower(frame_at(chart, p).gbar_lower, X(p)); };
  const Mat4 d = partial_vector(zeta, e, h);
  const Mat4 P = frame_at(chart, e).spatial_proj;
  // Pi^a_mu Pi^b_nu (d_a zeta_b - d_b zeta_a)
  return P.transpose() * (d - d.transpose()) * P;
}

Mat4 spatial_derivative(const SpacetimeChart& chart, const VectorFn& X, const Vec4& e, double h) {
  const Mat4 N = nabla_vector(chart, X, e, h);
  const Mat4 P = frame_at(chart, e).spatial_proj;
  return P.transpose() * N * P.transpose();
}

double sdiv(const SpacetimeChart& chart, const VectorFn& X, const Vec4& e, double h) {
  return spatial_derivative(chart, X, e, h).trace();
}

Vec4 spatial_gradient(const SpacetimeChart& chart, const ScalarFn& f, const Vec4& e, double h) {
  const Vec4 g = gradient(f, e, h);
  const Mat4 P = frame_at(chart, e).spatial_proj;
  Vec4 out{};
  for (int m = 0; m < 4; ++m)
    for (int a = 0; a < 4; ++a) out[m] += P(a, m) * g[a];
  return out;
}

double laplace_beltrami(const SpacetimeChart& chart, const ScalarFn& f, const Vec4& e, double h) {
  TensorFn w = [&](const Vec4& p) { return Tensor::covector(spatial_gradient(chart, f, p, h)); };
  const FoliationFrame fr = frame_at(chart, e);
  const Tensor d = project_spatial(fr, covariant_derivative_at(chart, w, e, h, 4));
  double s = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) s += fr.gbar_upper(a, b) * d.at({a, b});
  return s;
}

void check_velocity(const SpacetimeChart& chart, const Vec4& u, const Vec4& e) {
  for (double v : u)
    if (!std::isfinite(v)) throw InvalidVelocity("four-velocity has non-finite components");
  const Mat4 g = chart.metric(e);
  double n = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) n += g(a, b) * u[a] * u[b];
  if (std::abs(n + 1.0) > 1e-8) throw InvalidVelocity("four-velocity is not unit timelike");
  const FoliationFrame fr = frame_at(chart, e);
  double ut = 0.0;
  for (int a = 0; a < 4; ++a) ut += fr.tau_lower[a] * u[a];
  if (!(ut < 0.0)) throw InvalidVelocity("four-velocity is not future directed");
  if (std::abs(ut) < 1.0 - 1e-9) throw InvalidVelocity("four-velocity has |u_tau| < 1");
}

VelocitySplit split_velocity(const SpacetimeChart& chart, const Vec4& u, const Vec4& e) {
  const FoliationFrame fr = frame_at(chart, e);
  VelocitySplit s{};
  for (int a = 0; a < 4; ++a) s.u_tau += fr.tau_lower[a] * u[a];
  for (int a = 0; a < 4; ++a) s.u_bar[a] = u[a] + s.u_tau * fr.tau_upper[a];
  double n = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) n += fr.gbar_lower(a, b) * s.u_bar[a] * s.u_bar[b];
  s.u_bar_norm = std::sqrt(std::max(n, 0.0));
  s.lambda = s.u_bar_norm / std::abs(s.u_tau);
  return s;
}

double material_derivative(const ScalarFn& f, const Vec4& u, const Vec4& e, double h) {
  const Vec4 g = gradient(f, e, h);
  double s = 0.0;
  for (int a = 0; a < 4; ++a) s += u[a] * g[a];
  return s;
}

Vec4 material_derivative(const SpacetimeChart& chart, const VectorFn& X, const Vec4& u, const Vec4& e, double h) {
  const Mat4 N = nabla_vector(chart, X, e, h);
  Vec4 out{};
  for (int n = 0; n < 4; ++n)
    for (int a = 0; a < 4; ++a) out[n] += u[a] * N(a, n);
  return out;
}

double tau_derivative(const SpacetimeChart& chart, const ScalarFn& f, const VectorFn& u, const Vec4& e, double h) {
  const Vec4 uu = u(e);
  const VelocitySplit sp = split_velocity(chart, uu, e);
  const Vec4 g = gradient(f, e, h);
  double du = 0.0, dbar = 0.0;
  for (int a = 0; a < 4; ++a) {
    du += uu[a] * g[a];
    dbar += sp.u_bar[a] * g[a];
  }
  return (du - dbar) / (-sp.u_tau);
}

Vec4 tau_derivative(const SpacetimeChart& chart, const VectorFn& X, const VectorFn& u, const Vec4& e, double h) {
  const Vec4 uu = u(e);
  const VelocitySplit sp = split_velocity(chart, uu, e);
  const Mat4 N = nabla_vector(chart, X, e, h);
  Vec4 out{};
  for (int n = 0; n < 4; ++n) {
    double du = 0.0, dbar = 0.0;
    for (int a = 0; a < 4; ++a) {
      du += uu[a] * N(a, n);
      dbar += sp.u_bar[a] * N(a, n);
    }
    out[n] = (du - dbar) / (-sp.u_tau);
  }
  return out;
}

Tensor project_spatial(const FoliationFrame& fr, const Tensor& t) {
  Tensor out = t;
  const Mat4 P = fr.spatial_proj;
  for (int s = 0; s < t.rank(); ++s) out = apply_to_slot(out, s, t.upper[s] ? P : Mat4(P.transpose()));
  return out;
}

namespace {

// Contract the prepended derivative slot of d with the vector v.
Tensor contract_first(const Tensor& d, const Vec4& v) {
  std::vector<bool> slots(d.upper.begin() + 1, d.upper.end());
  Tensor out(slots);
  const std::size_t n = out.size();
  for (int a = 0; a < 4; ++a)
    for (std::size_t i = 0; i < n; ++i) out.c[i] += v[a] * d.c[a * n + i];
  return out;
}

}  // namespace

TensorFn spatial_derivative(const SpacetimeChart& chart, TensorFn f, double h) {
  return [chart, f = std::move(f), h](const Vec4& e) {
    return project_spatial(frame_at(chart, e), covariant_derivative_at(chart, f, e, h, 4));
  };
}

TensorFn material_derivative(const SpacetimeChart& chart, TensorFn f, VectorFn u, double h) {
  return [chart, f = std::move(f), u = std::move(u), h](const Vec4& e) {
    return contract_first(covariant_derivative_at(chart, f, e, h, 4), u(e));
  };
}

TensorFn tau_derivative(const SpacetimeChart& chart, TensorFn f, VectorFn u, double h) {
  return [chart, f = std::move(f), u = std::move(u), h](const Vec4& e) {
    const Vec4 uu = u(e);
    const VelocitySplit sp = split_velocity(chart, uu, e);
    const Tensor d = covariant_derivative_at(chart, f, e, h, 4);
    Tensor a = contract_first(d, uu);
    const Tensor b = contract_first(d, sp.u_bar);
    for (std::size_t i = 0; i < a.size(); ++i) a.c[i] = (a.c[i] - b.c[i]) / (-sp.u_tau);
    return a;
  };
}

double riem_norm(const SpacetimeChart& chart, const Tensor& t, const Vec4& e) {
  return tensor_norm(t, frame_at(chart, e).riem_lower);
}

double l2_norm(const SampleSet& s, const std::function<double(const Vec4&)>& pointwise_norm) {
  return lp_norm(s, pointwise_norm, 2.0);
}

double lp_norm(const SampleSet& s, const std::function<double(const Vec4&)>& pointwise_norm, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += s.weights[i] * std::pow(std::abs(pointwise_norm(s.points[i])), p);
  return std::pow(acc, 1.0 / p);
}

double sup_norm(const SampleSet& s, const std::function<double(const Vec4&)>& pointwise_norm) {
  double m = 0.0;
  for (const Vec4& p : s.points) m = std::max(m, std::abs(pointwise_norm(p)));
  return m;
}

MixedNorm mixed_norm(const SpacetimeChart& chart, const SampleSet& s, const TensorFn& f, const VectorFn& u, int k,
                     int l, double h) {
  if (k < 0 || l < 0) throw std::invalid_argument("norm orders must be non-negative");
  MixedNorm out{k, l, 0.0};
  TensorFn g = f;
  for (int m = 0; m <= l; ++m) {
    if (m > 0) g = material_derivative(chart, g, u, h);
    TensorFn q = g;
    for (int j = 0; j <= k; ++j) {
      if (j > 0) q = spatial_derivative(chart, q, h);
      out.value += l2_norm(s, [&](const Vec4& e) { return riem_norm(chart, q(e), e); });
    }
  }
  return out;
}

double sobolev_norm(const SpacetimeChart& chart, const SampleSet& s, const TensorFn& f, int k, double h) {
  return mixed_norm(chart, s, f, VectorFn{}, k, 0, h).value;
}

void write_field_csv(const std::string& path, const SampleSet& s, const std::vector<std::vector<double>>& comps,
                     const std::vector<std::string>& names) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "t,x,y,z";
  for (const auto& n : names) os << ',' << n;
  os << '\n' << std::setprecision(12);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Vec4& p = s.points[i];
    os << p[0] << ',' << p[1] << ',' << p[2] << ',' << p[3];
    for (const auto& c : comps) os << ',' << c.at(i);
    os << '\n';
  }
}

}  // namespace fluidlab
