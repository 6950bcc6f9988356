#include "fluidlab/boundary.hpp"

#include "fluidlab/fields.hpp"

#include <algorithm>
#include <cmath>

namespace fluidlab {

double cutoff_chi(double d, double iota0) {
  const double a = 0.25 * iota0, b = 0.5 * iota0;
  if (d <= a) return 1.0;
  if (d >= b) return 0.0;
  const double s = (d - a) / (b - a);
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

BallDomain::BallDomain(double radius) : R(radius), iota0(radius) {
  if (!(radius > 0.0)) throw GeometryError("ball radius must be positive");
}

double BallDomain::distance(const Vec3& x) const {
  return std::abs(R - std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
}

Vec3 BallDomain::normal_ext(const Vec3& x) const {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  if (r == 0.0) return {0.0, 0.0, 0.0};
  return {x[0] / r, x[1] / r, x[2] / r};
}

Mat3 BallDomain::proj_ext(const Vec3& x) const {
  const Vec3 n = normal_ext(x);
  const double c = chi(x);
  Mat3 P = Mat3::Identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) P(i, j) -= c * n[i] * n[j];
  return P;
}

namespace {

// In place T[..a..] <- sum_b P(a, b) T[..b..] on every slot.
void project_slots(double* t, int rank, const Mat3& P, std::vector<double>& tmp) {
  const std::size_t nc = pow3(rank);
  tmp.resize(nc);
  for (int s = 0; s < rank; ++s) {
    const std::size_t stride = pow3(rank - s - 1);
    for (std::size_t i = 0; i < nc; ++i) {
      const int a = static_cast<int>((i / stride) % 3);
      const std::size_t base = i - a * stride;
      tmp[i] = P(a, 0) * t[base] + P(a, 1) * t[base + stride] + P(a, 2) * t[base + 2 * stride];
    }
    std::copy(tmp.begin(), tmp.end(), t);
  }
}

double norm_sq(const double* t, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += t[i] * t[i];
  return s;
}

std::vector<Vec3> spatial_points(const SampleSet& s) {
  std::vector<Vec3> p;
  p.reserve(s.size());
  for (const Vec4& e : s.points) p.push_back({e[1], e[2], e[3]});
  return p;
}

Mat3 spatial_inverse_metric(const SpacetimeChart& chart, const Vec3& x) {
  return chart.inverse_metric({0.0, x[0], x[1], x[2]}).block<3, 3>(1, 1);
}

// Unit normal of the level set r - R on the lattice (zero where the gradient
// degenerates, i.e. at the center node).
LatticeField level_set_normal(const Lattice3& lat, const BallDomain& dom, const SpacetimeChart& chart) {
  LatticeField phi = sample_scalar(lat, [&](const Vec3& x) {
    return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) - dom.R;
  });
  LatticeField N = grad(phi);
  for (int i = 0; i < lat.n; ++i)
    for (int j = 0; j < lat.n; ++j)
      for (int k = 0; k < lat.n; ++k) {
        double* n = N.at(lat.index(i, j, k));
        const Mat3 gi = spatial_inverse_metric(chart, lat.coord(i, j, k));
        double s = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) s += gi(a, b) * n[a] * n[b];
        const double len = std::sqrt(s);
        for (int a = 0; a < 3; ++a) n[a] = len > 1e-10 ? n[a] / len : 0.0;
      }
  return N;
}

Mat3 tangential_projection(const double* N) {
  Mat3 P = Mat3::Identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) P(i, j) -= N[i] * N[j];
  return P;
}

}  // namespace

LatticeField project_all(const LatticeField& f, const BallDomain& dom) {
  LatticeField out = f;
  const Lattice3& lat = *f.lat;
  std::vector<double> tmp;
  for (int i = 0; i < lat.n; ++i)
    for (int j = 0; j < lat.n; ++j)
      for (int k = 0; k < lat.n; ++k)
        project_slots(out.at(lat.index(i, j, k)), f.rank, dom.proj_ext(lat.coord(i, j, k)), tmp);
  return out;
}

LatticeField boundary_grad(const LatticeField& f, const BallDomain& dom) { return project_all(grad(f), dom); }

SecondFundamentalFormReport second_fundamental_form(const BallDomain& dom, const SpacetimeChart& chart, double h,
                                                    int ntheta, int nphi) {
  const Lattice3 lat = Lattice3::covering(dom.R, h);
  const SampleSet sph = sphere_grid(dom.R, ntheta, nphi);
  const Interpolator I(lat, spatial_points(sph));
  const LatticeField N = level_set_normal(lat, dom, chart);
  const LatticeField DN = grad(N);
  // theta on the lattice with the extended projection, for its boundary gradient.
  LatticeField theta_ext = project_all(DN, dom);
  const LatticeField Dtheta = boundary_grad(theta_ext, dom);

  SecondFundamentalFormReport rep;
  double l2 = 0.0, l2d = 0.0, tr = 0.0, wsum = 0.0;
  double n[3], dn[9], dth[27];
  for (std::size_t p = 0; p < sph.size(); ++p) {
    I.eval(N, p, n);
    const Vec3 x = {sph.points[p][1], sph.points[p][2], sph.points[p][3]};
    const Mat3 gi = spatial_inverse_metric(chart, x);
    double nn = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) nn += gi(a, b) * n[a] * n[b];
    if (nn < 1e-20) throw GeometryError("degenerate boundary normal");
    rep.normal_err = std::max(rep.normal_err, std::abs(nn - 1.0));
    const double len = std::sqrt(nn);
    for (double& c : n) c /= len;
    const Mat3 P = tangential_projection(n);
    Eigen::Vector3d nv(n[0], n[1], n[2]);
    rep.proj_normal_err = std::max(rep.proj_normal_err, (P * nv).norm());
    I.eval(DN, p, dn);
    Mat3 D;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) D(a, b) = dn[3 * a + b];
    const Mat3 th = P * D * P;
    const double tn = th.norm();
    rep.theta_max = std::max(rep.theta_max, tn);
    rep.symmetry_err = std::max(rep.symmetry_err, (th - th.transpose()).cwiseAbs().maxCoeff());
    rep.analytic_err = std::max(rep.analytic_err, (th - P / dom.R).cwiseAbs().maxCoeff());
    l2 += sph.weights[p] * tn * tn;
    I.eval(Dtheta, p, dth);
    l2d += sph.weights[p] * norm_sq(dth, 27);
    tr += sph.weights[p] * th.trace();
    wsum += sph.weights[p];
  }
  rep.theta_l2 = std::sqrt(l2);
  rep.theta_h1 = std::sqrt(l2) + std::sqrt(l2d);
  rep.trace_mean = tr / wsum;
  rep.K = rep.theta_max + 1.0 / dom.iota0;
  return rep;
}

double fit_order(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = h.size();
  if (n < 2 || err.size() != n) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(std::max(err[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ProjectionIdentityReport projection_identity_check(const BallDomain& dom, const SpacetimeChart& chart,
                                                   const Scalar3Fn& q, const std::vector<double>& hs, int ntheta,
                                                   int nphi) {
  const SampleSet sph = sphere_grid(dom.R, ntheta, nphi);
  const std::vector<Vec3> pts = spatial_points(sph);
  for (const Vec3& x : pts)
    if (std::abs(q(x)) > 1e-10) throw PreconditionError("q must vanish on the boundary");
  ProjectionIdentityReport rep;
  for (double h : hs) {
    const Lattice3 lat = Lattice3::covering(dom.R, h);
    const Interpolator I(lat, pts);
    const LatticeField Q = sample_scalar(lat, q);
    const LatticeField Dq = grad(Q);
    const LatticeField DDq = grad(Dq);
    const LatticeField N = level_set_normal(lat, dom, chart);
    const LatticeField DN = grad(N);
    double worst = 0.0;
    double n[3], dq[3], ddq[9], dn[9];
    for (std::size_t p = 0; p < pts.size(); ++p) {
      I.eval(N, p, n);
      const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
      for (double& c : n) c /= len;
      const Mat3 P = tangential_projection(n);
      I.eval(Dq, p, dq);
      I.eval(DDq, p, ddq);
      I.eval(DN, p, dn);
      Mat3 H, D;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          H(a, b) = ddq[3 * a + b];
          D(a, b) = dn[3 * a + b];
        }
      const double dNq = n[0] * dq[0] + n[1] * dq[1] + n[2] * dq[2];
      const Mat3 res = P * H * P - (P * D * P) * dNq;
      worst = std::max(worst, res.norm());
    }
    rep.h.push_back(h);
    rep.residual.push_back(worst);
  }
  rep.order = fit_order(rep.h, rep.residual);
  return rep;
}

TaylorMargin taylor_sign_margin(const std::vector<double>& x, const std::vector<double>& sigma, const AffineEos& eos) {
  const std::size_t n = x.size();
  if (n < 3 || sigma.size() != n) throw std::invalid_argument("profile needs at least 3 nodes");
  // Derivative at x2 of the quadratic through the last three nodes.
  const double x0 = x[n - 3], x1 = x[n - 2], x2 = x[n - 1];
  const double f0 = sigma[n - 3], f1 = sigma[n - 2], f2 = sigma[n - 1];
  const double ds = f0 * (x2 - x1) / ((x0 - x1) * (x0 - x2)) + f1 * (x2 - x0) / ((x1 - x0) * (x1 - x2)) +
                    f2 * (2 * x2 - x0 - x1) / ((x2 - x0) * (x2 - x1));
  const double sb = sigma[n - 1];
  const double dpds = eos.rho(sb) / (2.0 * std::sqrt(sb));
  TaylorMargin m;
  m.delta_prime = -ds;
  m.delta = -dpds * ds;
  m.degenerate = !(m.delta > 1e-12);
  return m;
}

DgamReport dgam_constant(const BallDomain& dom, double h) {
  const Lattice3 lat = Lattice3::covering(dom.R, h);
  const LatticeField gam = sample(lat, 2, [&](const Vec3& x, double* o) {
    const Mat3 P = dom.gamma_ext(x);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) o[3 * a + b] = P(a, b);
  });
  const LatticeField D = grad(gam);
  DgamReport rep;
  for (int i = 0; i < lat.n; ++i)
    for (int j = 0; j < lat.n; ++j)
      for (int k = 0; k < lat.n; ++k) {
        const Vec3 x = lat.coord(i, j, k);
        if (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] > dom.R * dom.R) continue;
        rep.dgamma_sup = std::max(rep.dgamma_sup, std::sqrt(norm_sq(D.at(lat.index(i, j, k)), 27)));
      }
  // |gamma / R| on the sphere.
  rep.theta_sup = std::sqrt(2.0) / dom.R;
  rep.constant = rep.dgamma_sup / (rep.theta_sup + 1.0 / dom.iota0);
  return rep;
}

}  // namespace fluidlab
