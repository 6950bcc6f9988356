#include "fluidlab/evolve.hpp"

#include "fluidlab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fluidlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sinc(double z) { return std::abs(z) < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z; }

RadialState axpy(const RadialState& s, double c, const RadialRhs& r) {
  RadialState o = s;
  for (std::size_t j = 0; j < s.nodes(); ++j) {
    o.x[j] += c * r.x[j];
    o.sigma[j] += c * r.sigma[j];
    o.Vr[j] += c * r.Vr[j];
    o.Vt[j] += c * r.Vt[j];
    o.J[j] += c * r.J[j];
  }
  o.exchange += c * r.exchange;
  o.t += c;
  return o;
}

}  // namespace

RadialSolver::RadialSolver(SpacetimeChart chart, AffineEos eos, int n, double R0)
    : chart_(chart), eos_(eos), n_(n), R0_(R0) {
  if (n < 8 || n % 2) throw ConfigError("radial grid needs an even number of intervals n >= 8");
  if (!(R0 > 0.0)) throw ConfigError("ball radius must be positive");
  simpson_.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (int j = 0; j <= n; ++j) {
    const double c = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    simpson_[j] = c * dy() / 3.0;
  }
}

RadialState RadialSolver::hydrostatic() const {
  RadialState s;
  const std::size_t N = static_cast<std::size_t>(n_) + 1;
  s.x.resize(N);
  s.sigma.resize(N);
  s.Vr.assign(N, 0.0);
  s.Vt.resize(N);
  s.J.assign(N, 1.0);
  const double aR2 = lapse2(R0_);
  for (std::size_t j = 0; j < N; ++j) {
    s.x[j] = label(static_cast<int>(j));
    const double a2 = lapse2(s.x[j]);
    s.sigma[j] = eos_.sigma0() * aR2 / a2;
    s.Vt[j] = std::sqrt(s.sigma[j] / a2);
  }
  s.sigma.back() = eos_.sigma0();
  return s;
}

RadialState RadialSolver::perturbed(double amp, int mode) const {
  RadialState s = hydrostatic();
  for (std::size_t j = 0; j + 1 < s.nodes(); ++j) {
    s.sigma[j] *= 1.0 + amp * sinc(mode * kPi * s.x[j] / R0_);
    s.Vt[j] = std::sqrt(s.sigma[j] / lapse2(s.x[j]));
  }
  return s;
}

std::vector<double> RadialSolver::dlabel(const std::vector<double>& f, int parity) const {
  const std::size_t N = f.size();
  std::vector<double> d(N);
  const double h = dy();
  d[0] = (f[1] - parity * f[1]) / (2 * h);
  for (std::size_t j = 1; j + 1 < N; ++j) d[j] = (f[j + 1] - f[j - 1]) / (2 * h);
  // Centered difference with a cubically extrapolated ghost node. Its leading
  // error matches the interior stencil, so a centered difference of d taken
  // next to the boundary stays second order.
  d[N - 1] = (4 * f[N - 1] - 7 * f[N - 2] + 4 * f[N - 3] - f[N - 4]) / (2 * h);
  return d;
}

std::vector<double> RadialSolver::dradial(const RadialState& s, const std::vector<double>& f, int parity) const {
  std::vector<double> d = dlabel(f, parity);
  const std::vector<double> xy = dlabel(s.x, -1);
  for (std::size_t j = 0; j < d.size(); ++j) d[j] /= xy[j];
  return d;
}

std::vector<double> RadialSolver::dvolume(const RadialState& s, const std::vector<double>& F) const {
  const std::size_t N = F.size();
  std::vector<double> v(N), d(N);
  for (std::size_t j = 0; j < N; ++j) v[j] = s.x[j] * s.x[j] * s.x[j] / 3;
  // Odd ghost at the center: F(-x) = -F(x), v(-x) = -v(x).
  d[0] = F[1] / v[1];
  for (std::size_t j = 1; j + 1 < N; ++j) d[j] = (F[j + 1] - F[j - 1]) / (v[j + 1] - v[j - 1]);
  // Three point one-sided derivative on the nonuniform v nodes.
  const double v0 = v[N - 1], v1 = v[N - 2], v2 = v[N - 3];
  const double h1 = v0 - v1, h2 = v0 - v2;
  d[N - 1] = ((h1 + h2) / (h1 * h2)) * F[N - 1] - (h2 / (h1 * (h2 - h1))) * F[N - 2] + (h1 / (h2 * (h2 - h1))) * F[N - 3];
  return d;
}

RadialRhs RadialSolver::rhs(const RadialState& s) const {
  const std::size_t N = s.nodes();
  const double k = chart_.k();
  RadialRhs r;
  r.x.resize(N);
  r.sigma.resize(N);
  r.Vr.resize(N);
  r.Vt.resize(N);
  r.J.resize(N);
  std::vector<double> a2(N), w(N), A(N), flux(N);
  for (std::size_t j = 0; j < N; ++j) {
    a2[j] = lapse2(s.x[j]);
    w[j] = s.Vr[j] / s.Vt[j];
    A[j] = a2[j] * s.sigma[j];
    flux[j] = s.x[j] * s.x[j] * w[j];
  }
  const std::vector<double> dA = dradial(s, A, +1);
  const std::vector<double> dw = dradial(s, w, -1);
  // Divergence of the node velocity in conservative form r^-2 d(r^2 w); it is
  // the discrete adjoint of the centered gradient, which keeps the scheme stable.
  const std::vector<double> divw = dvolume(s, flux);
  std::vector<double> fluxV(N);
  for (std::size_t j = 0; j < N; ++j) fluxV[j] = s.x[j] * s.x[j] * s.Vr[j];
  const std::vector<double> sdivV = dvolume(s, fluxV);
  const std::vector<double> dVr = dradial(s, s.Vr, -1);
  const std::vector<double> dVt = dradial(s, s.Vt, +1);
  const std::vector<double> xy = dlabel(s.x, -1);
  double X = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const double Vt = s.Vt[j], Vr = s.Vr[j], x = s.x[j];
    // Momentum, with the pressure and lapse terms combined in d(a^2 sigma).
    r.Vr[j] = j == 0 ? 0.0 : -(dA[j] + 2 * k * x * Vr * Vr) / (2 * a2[j] * Vt);
    if (j + 1 == N) {
      r.sigma[j] = 0.0;
    } else {
      const double q = 1.0 / (2 * a2[j] * Vt * Vt);
      r.sigma[j] = -(Vr * r.Vr[j] / (a2[j] * Vt * Vt) + divw[j]) / (eos_.de(s.sigma[j]) + q);
    }
    // Keeps a^2 Vt^2 - sigma - Vr^2 constant along the semi-discrete flow.
    r.Vt[j] = (r.sigma[j] + 2 * Vr * r.Vr[j]) / (2 * a2[j] * Vt) - Vt * (k * x / a2[j]) * w[j];
    r.x[j] = w[j];
    r.J[j] = s.J[j] / Vt * (sdivV[j] - Vr * dVt[j] / Vt);
    X += simpson_[j] * eos_.rho(s.sigma[j]) * Vt * Vr * k * x * x * x / std::sqrt(s.sigma[j]) * xy[j];
  }
  r.exchange = 4 * kPi * X;
  return r;
}

StepInfo RadialSolver::step(RadialState& s, double dt) const {
  const RadialRhs k1 = rhs(s);
  const RadialRhs k2 = rhs(axpy(s, 0.5 * dt, k1));
  const RadialRhs k3 = rhs(axpy(s, 0.5 * dt, k2));
  const RadialRhs k4 = rhs(axpy(s, dt, k3));
  const double t0 = s.t;
  for (std::size_t j = 0; j < s.nodes(); ++j) {
    s.x[j] += dt / 6 * (k1.x[j] + 2 * k2.x[j] + 2 * k3.x[j] + k4.x[j]);
    s.sigma[j] += dt / 6 * (k1.sigma[j] + 2 * k2.sigma[j] + 2 * k3.sigma[j] + k4.sigma[j]);
    s.Vr[j] += dt / 6 * (k1.Vr[j] + 2 * k2.Vr[j] + 2 * k3.Vr[j] + k4.Vr[j]);
    s.Vt[j] += dt / 6 * (k1.Vt[j] + 2 * k2.Vt[j] + 2 * k3.Vt[j] + k4.Vt[j]);
    s.J[j] += dt / 6 * (k1.J[j] + 2 * k2.J[j] + 2 * k3.J[j] + k4.J[j]);
  }
  s.exchange += dt / 6 * (k1.exchange + 2 * k2.exchange + 2 * k3.exchange + k4.exchange);
  s.t = t0 + dt;

  StepInfo info;
  info.constraint_drift = constraint_violation(s);
  for (std::size_t j = 0; j < s.nodes(); ++j) {
    if (!std::isfinite(s.sigma[j]) || !std::isfinite(s.Vr[j])) throw NumericalAbort("non-finite state");
    if (j > 0 && !(s.x[j] > s.x[j - 1])) throw NumericalAbort("mesh tangling: nodes crossed");
    eos_.check_sigma(s.sigma[j]);
    const double a2 = lapse2(s.x[j]);
    s.Vt[j] = std::sqrt((s.sigma[j] + s.Vr[j] * s.Vr[j]) / a2);
    if (!(s.Vt[j] > 0.0)) throw NumericalAbort("-V^tau <= 0: velocity is not future directed");
  }
  return info;
}

double RadialSolver::cfl_dt(double cfl) const {
  const double eta = std::sqrt(eos_.c2());
  return cfl * dy() / (eta * std::sqrt(lapse2(R0_)));
}

double RadialSolver::acoustic_period() const {
  // Gauss-Legendre for 2 int_0^R dr / (eta a(r)).
  std::vector<double> x, w;
  gauss_legendre(16, x, w);
  double s = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double r = 0.5 * R0_ * (x[i] + 1);
    s += 0.5 * R0_ * w[i] / std::sqrt(lapse2(r));
  }
  return 2.0 * s / std::sqrt(eos_.c2());
}

double RadialSolver::constraint_violation(const RadialState& s) const {
  double m = 0.0;
  for (std::size_t j = 0; j < s.nodes(); ++j) {
    const double c = lapse2(s.x[j]) * s.Vt[j] * s.Vt[j] - s.sigma[j] - s.Vr[j] * s.Vr[j];
    m = std::max(m, std::abs(c));
  }
  return m;
}

double RadialSolver::lambda_max(const RadialState& s) const {
  double m = 0.0;
  for (std::size_t j = 0; j < s.nodes(); ++j)
    m = std::max(m, std::abs(s.Vr[j]) / (std::sqrt(lapse2(s.x[j])) * s.Vt[j]));
  return m;
}

double RadialSolver::volume_ode(const RadialState& s) const {
  double v = 0.0;
  for (std::size_t j = 0; j < s.nodes(); ++j) {
    const double y = label(static_cast<int>(j));
    v += simpson_[j] * s.J[j] * y * y;
  }
  return 4 * kPi * v;
}

double RadialSolver::volume_mesh(const RadialState& s) const { return 4 * kPi / 3 * std::pow(s.R(), 3); }

double RadialSolver::exchange_rate(const RadialState& s) const { return rhs(s).exchange; }

double RadialSolver::gamma_coefficient(const RadialState& s) const {
  const double q = R0_ / s.R();
  return q * q;
}

double RadialSolver::dtgam_residual(const RadialState& s) const {
  const auto dg = flow_derivative(s, [&](const RadialState& p) { return std::vector<double>{gamma_coefficient(p)}; });
  const double g = gamma_coefficient(s);
  // h = d/dt gbar_ab; its tangential part is d/dt (R / R0)^2.
  const double hT = 2 * s.R() * rhs(s).x.back() / (R0_ * R0_);
  return std::abs(dg[0] + g * g * hT);
}

double RadialSolver::dtgam_residual_fd(const RadialState& s0, const RadialState& s1) const {
  const double dt = s1.t - s0.t;
  const double g = gamma_coefficient(s0);
  const double hT = 2 * s0.R() * rhs(s0).x.back() / (R0_ * R0_);
  return std::abs((gamma_coefficient(s1) - g) / dt + g * g * hT);
}

ResidualReport RadialSolver::residuals(const RadialState& s) const {
  const std::size_t N = s.nodes();
  const RadialRhs r = rhs(s);
  ResidualReport rep;
  rep.constraint = constraint_violation(s);
  rep.boundary_p = std::abs(eos_.p(s.sigma.back()));
  rep.normal_velocity = std::abs(s.Vr.back() - r.x.back() * s.Vt.back());

  std::vector<double> w(N), ut(N), ur(N);
  for (std::size_t j = 0; j < N; ++j) {
    w[j] = s.Vr[j] / s.Vt[j];
    ut[j] = s.Vt[j] / std::sqrt(s.sigma[j]);
    ur[j] = s.Vr[j] / std::sqrt(s.sigma[j]);
  }
  const std::vector<double> dsig = dradial(s, s.sigma, +1);
  const std::vector<double> dVr = dradial(s, s.Vr, -1);
  const std::vector<double> dVt = dradial(s, s.Vt, +1);
  const std::vector<double> xy = dlabel(s.x, -1);

  // Y = Pi grad sigma in (t, r) components; Pi = g^{-1} + u u.
  auto Yfields = [&](const RadialState& p) {
    const RadialRhs rp = rhs(p);
    const std::vector<double> ds = dradial(p, p.sigma, +1);
    std::vector<double> Yt(p.nodes()), Yr(p.nodes());
    for (std::size_t j = 0; j < p.nodes(); ++j) {
      const double a2 = lapse2(p.x[j]);
      const double uT = p.Vt[j] / std::sqrt(p.sigma[j]), uR = p.Vr[j] / std::sqrt(p.sigma[j]);
      const double wj = p.Vr[j] / p.Vt[j];
      const double st = rp.sigma[j] - wj * ds[j];
      Yt[j] = (-1.0 / a2 + uT * uT) * st + uT * uR * ds[j];
      Yr[j] = uT * uR * st + (1.0 + uR * uR) * ds[j];
    }
    return std::make_pair(Yt, Yr);
  };
  const auto [Yt, Yr] = Yfields(s);
  const std::vector<double> DYt = flow_derivative(s, [&](const RadialState& p) { return Yfields(p).first; });
  std::vector<double> flux(N);
  for (std::size_t j = 0; j < N; ++j) flux[j] = std::sqrt(lapse2(s.x[j])) * s.x[j] * s.x[j] * Yr[j];
  const std::vector<double> dflux = dvolume(s, flux);
  const std::vector<double> dYt = dradial(s, Yt, +1);
  // nabla_u sigma = u^t D sigma and its material derivative.
  const std::vector<double> Dus = flow_derivative(s, [&](const RadialState& p) {
    const RadialRhs rp = rhs(p);
    std::vector<double> v(p.nodes());
    for (std::size_t j = 0; j < p.nodes(); ++j) v[j] = p.Vt[j] / std::sqrt(p.sigma[j]) * rp.sigma[j];
    return v;
  });
  const std::vector<double> DdVr = flow_derivative(s, [&](const RadialState& p) { return dradial(p, p.Vr, -1); });
  const std::vector<double> Ddsig =
      flow_derivative(s, [&](const RadialState& p) { return dradial(p, p.sigma, +1); });
  const std::vector<double> ddsig = dradial(s, dsig, -1);

  std::vector<double> divV(N, 0.0);
  rep.wave_profile.assign(N, 0.0);
  double wave2 = 0.0, mom2 = 0.0;
  for (std::size_t j = 1; j < N; ++j) {
    const double x = s.x[j];
    const Vec4 e{s.t, x, 0.0, 0.0};
    const Christoffel G = chart_.christoffel(e);
    // Cartesian components along the x axis: V^i = Vr x^i / r.
    const double dtVt = r.Vt[j] - w[j] * dVt[j];
    const double dtVr = r.Vr[j] - w[j] * dVr[j];
    double dV[4][4] = {{dtVt, dtVr, 0, 0}, {dVt[j], dVr[j], 0, 0}, {0, 0, s.Vr[j] / x, 0}, {0, 0, 0, s.Vr[j] / x}};
    const Vec4 V{s.Vt[j], s.Vr[j], 0, 0};
    Mat4 Nv;
    for (int m = 0; m < 4; ++m)
      for (int nu = 0; nu < 4; ++nu) {
        double v = dV[m][nu];
        for (int l = 0; l < 4; ++l) v += G.G[nu][m][l] * V[l];
        Nv(m, nu) = v;
      }
    double F0 = 0.0;
    for (int m = 0; m < 4; ++m)
      for (int nu = 0; nu < 4; ++nu) F0 += Nv(m, nu) * Nv(nu, m);
    const Mat4 ric = chart_.ricci(e);
    double RicVV = 0.0;
    for (int m = 0; m < 4; ++m)
      for (int nu = 0; nu < 4; ++nu) RicVV += ric(m, nu) * V[m] * V[nu];
    divV[j] = Nv.trace();

    const FoliationFrame fr = frame_at(chart_, e);
    const Mat4 P = fr.spatial_proj;
    const double sdiv = (P.transpose() * Nv * P.transpose()).trace();
    double taudt = 0.0;
    for (int m = 0; m < 4; ++m)
      for (int nu = 0; nu < 4; ++nu) taudt += fr.tau_upper[m] * Nv(m, nu) * fr.tau_lower[nu];
    rep.sdiv_gap = std::max(rep.sdiv_gap, std::abs(sdiv - divV[j] - taudt));

    if (j + 1 == N) continue;
    const double a = std::sqrt(lapse2(x));
    const double dtYt = DYt[j] - w[j] * dYt[j];
    const double divY = dtYt + dflux[j] / a;
    const double us = ut[j] * r.sigma[j];
    const double uus = ut[j] * Dus[j];
    const double sg = s.sigma[j];
    const double src = 2 * F0 + 2 * RicVV + (1.0 / (2 * sg) - 2 * sg * eos_.d2e(sg)) * us * us;
    const double res = uus / eos_.c2() - divY - src;
    rep.wave_profile[j] = res;
    const double wq = 4 * kPi * x * x * xy[j] * dy();
    wave2 += wq * res * res;
    const double mom = s.Vt[j] * DdVr[j] + 0.5 * ddsig[j];
    mom2 += wq * mom * mom;
  }
  divV[0] = divV[1];
  const std::vector<double> ddiv = dradial(s, divV, +1);
  double mass2 = 0.0;
  for (std::size_t j = 1; j + 1 < N; ++j) {
    const double m = ddiv[j] + eos_.de(s.sigma[j]) * s.Vt[j] * Ddsig[j];
    mass2 += 4 * kPi * s.x[j] * s.x[j] * xy[j] * dy() * m * m;
  }
  rep.wave = std::sqrt(wave2);
  rep.he_mom1 = std::sqrt(mom2);
  rep.he_mass1 = std::sqrt(mass2);
  return rep;
}

}  // namespace fluidlab
