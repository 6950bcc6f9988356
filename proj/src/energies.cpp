#include "fluidlab/energies.hpp"

#include <cmath>
#include <stdexcept>

namespace fluidlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::size_t ipow3(int k) {
  std::size_t n = 1;
  for (int i = 0; i < k; ++i) n *= 3;
  return n;
}

}  // namespace

double qform(const Mat3& gamma, const double* a, const double* b, int rank) {
  if (rank == 0) return a[0] * b[0];
  const std::size_t n = ipow3(rank);
  const std::size_t inner = n / 3;
  // Contract the first slot with gamma, recurse on the rest.
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (gamma(i, j) == 0.0) continue;
      s += gamma(i, j) * qform(gamma, a + i * inner, b + j * inner, rank - 1);
    }
  return s;
}

std::vector<double> radial_scalar_derivative(const RadialScalarJet& f, double r, int k) {
  if (k == 0) return {f.f};
  if (k == 1) return {f.df, 0.0, 0.0};
  if (k != 2) throw std::invalid_argument("radial derivatives are available up to order 2");
  // f'' n n + (f' / r)(delta - n n) at n = e_x.
  std::vector<double> out(9, 0.0);
  out[0] = f.ddf;
  out[4] = out[8] = r > 0 ? f.df / r : f.ddf;
  return out;
}

std::vector<double> radial_vector_derivative(const RadialVectorJet& A, double r, double k_trap, int k) {
  // Index layout: derivative slots (3 each) then the vector index (t, x, y, z).
  const double a2 = 1.0 + k_trap * r * r;
  const double G = k_trap * r / a2;  // Gamma^t_{tr}
  if (k == 0) return {A.At, A.Ar, 0.0, 0.0};
  if (k == 1) {
    std::vector<double> T(12, 0.0);
    // nabla_i A^t = (A^t' + G A^t) n_i; d_i (A^r n_j) = A^r' n n + (A^r / r)(delta - n n).
    T[0 * 4 + 0] = A.dAt + G * A.At;
    T[0 * 4 + 1] = A.dAr;
    const double g = r > 0 ? A.Ar / r : A.dAr;
    T[1 * 4 + 2] = g;
    T[2 * 4 + 3] = g;
    return T;
  }
  if (k != 2) throw std::invalid_argument("radial derivatives are available up to order 2");
  std::vector<double> T(36, 0.0);
  auto at = [&](int i, int j, int mu) -> double& { return T[(i * 3 + j) * 4 + mu]; };
  // t component: alpha n_k with alpha = A^t' + G A^t.
  const double dG = k_trap * (1.0 - k_trap * r * r) / (a2 * a2);
  const double alpha = A.dAt + G * A.At;
  const double dalpha = A.ddAt + dG * A.At + G * A.dAt;
  at(0, 0, 0) = dalpha + G * alpha;
  if (r > 0) {
    at(1, 1, 0) = at(2, 2, 0) = alpha / r;
    // Spatial part: (r g'' - g') n n n + g' (delta_ik n_j + delta_ij n_k + delta_jk n_i), g = A^r / r.
    const double g1 = A.dAr / r - A.Ar / (r * r);
    const double g2 = A.ddAr / r - 2 * A.dAr / (r * r) + 2 * A.Ar / (r * r * r);
    at(0, 0, 1) = r * g2 - g1 + 3 * g1;
    for (int m = 1; m < 3; ++m) {
      at(m, m, 1) += g1;      // delta_ik n_j
      at(0, m, 1 + m) += g1;  // delta_ij n_k
      at(m, 0, 1 + m) += g1;  // delta_jk n_i
    }
  }
  return T;
}

double radial_vector_q(const RadialVectorJet& A, double r, double k_trap, double chi, int k) {
  const std::vector<double> T = radial_vector_derivative(A, r, k_trap, k);
  const double a2 = 1.0 + k_trap * r * r;
  const double wslot[3] = {1.0 - chi, 1.0, 1.0};
  const double wvec[4] = {a2, 1.0, 1.0, 1.0};
  double s = 0.0;
  const std::size_t nd = ipow3(k);
  for (std::size_t I = 0; I < nd; ++I) {
    double w = 1.0;
    std::size_t rest = I;
    for (int slot = 0; slot < k; ++slot) {
      w *= wslot[rest % 3];
      rest /= 3;
    }
    for (int mu = 0; mu < 4; ++mu) s += w * wvec[mu] * T[I * 4 + mu] * T[I * 4 + mu];
  }
  return s;
}

double radial_scalar_q(const RadialScalarJet& f, double r, double chi, int k) {
  const std::vector<double> T = radial_scalar_derivative(f, r, k);
  Mat3 gamma = Mat3::Identity();
  gamma(0, 0) = 1.0 - chi;
  return qform(gamma, T.data(), T.data(), k);
}

RadialEnergies::RadialEnergies(const RadialSolver& solver, const RadialState& s, double delta_floor)
    : S_(solver), s_(s), delta_floor_(delta_floor), k_(solver.chart().k()) {
  const std::size_t N = s.nodes();
  const RadialRhs rhs = S_.rhs(s);
  a2_.resize(N);
  ut_.resize(N);
  ur_.resize(N);
  for (std::size_t j = 0; j < N; ++j) {
    a2_[j] = S_.lapse2(s.x[j]);
    ut_[j] = s.Vt[j] / std::sqrt(s.sigma[j]);
    ur_[j] = s.Vr[j] / std::sqrt(s.sigma[j]);
  }
  xy_ = S_.dlabel(s.x, -1);
  Dsig_ = rhs.sigma;

  // nabla_u A along the node paths: u^nu d_nu = u^t D plus the Christoffel terms.
  auto material = [this](const RadialState& p, const std::vector<double>& At, const std::vector<double>& Ar,
                         const std::vector<double>& DAt, const std::vector<double>& DAr) {
    std::vector<double> out(2 * p.nodes());
    for (std::size_t j = 0; j < p.nodes(); ++j) {
      const double x = p.x[j], a2 = S_.lapse2(x);
      const double uT = p.Vt[j] / std::sqrt(p.sigma[j]), uR = p.Vr[j] / std::sqrt(p.sigma[j]);
      out[j] = uT * DAt[j] + k_ * x / a2 * (uT * Ar[j] + uR * At[j]);
      out[p.nodes() + j] = uT * DAr[j] + k_ * x * uT * At[j];
    }
    return out;
  };
  auto first = [&](const RadialState& p) {
    const RadialRhs r = S_.rhs(p);
    return material(p, p.Vt, p.Vr, r.Vt, r.Vr);
  };
  const std::vector<double> B = first(s);
  const std::vector<double> DB = S_.flow_derivative(s, first);
  const std::vector<double> Bt(B.begin(), B.begin() + N), Br(B.begin() + N, B.end());
  const std::vector<double> DBt(DB.begin(), DB.begin() + N), DBr(DB.begin() + N, DB.end());
  const std::vector<double> C = material(s, Bt, Br, DBt, DBr);
  const std::vector<double> Ct(C.begin(), C.begin() + N), Cr(C.begin() + N, C.end());

  auto vjet = [&](const std::vector<double>& At, const std::vector<double>& Ar) {
    const std::vector<double> dAt = S_.dradial(s, At, +1), dAr = S_.dradial(s, Ar, -1);
    const std::vector<double> ddAt = S_.dradial(s, dAt, -1), ddAr = S_.dradial(s, dAr, +1);
    std::vector<RadialVectorJet> out(N);
    for (std::size_t j = 0; j < N; ++j) out[j] = {At[j], dAt[j], ddAt[j], Ar[j], dAr[j], ddAr[j]};
    return out;
  };
  vjet_ = {vjet(s.Vt, s.Vr), vjet(Bt, Br), vjet(Ct, Cr)};

  auto s1 = [&](const RadialState& p) {
    const RadialRhs r = S_.rhs(p);
    std::vector<double> v(p.nodes());
    for (std::size_t j = 0; j < p.nodes(); ++j) v[j] = p.Vt[j] / std::sqrt(p.sigma[j]) * r.sigma[j];
    return v;
  };
  const std::vector<double> sig1 = s1(s);
  Ds1_ = S_.flow_derivative(s, s1);
  std::vector<double> sig2(N);
  for (std::size_t j = 0; j < N; ++j) sig2[j] = ut_[j] * Ds1_[j];
  auto sjet = [&](const std::vector<double>& f) {
    const std::vector<double> df = S_.dradial(s, f, +1);
    const std::vector<double> ddf = S_.dradial(s, df, -1);
    std::vector<RadialScalarJet> out(N);
    for (std::size_t j = 0; j < N; ++j) out[j] = {f[j], df[j], ddf[j]};
    return out;
  };
  sjet_ = {sjet(s.sigma), sjet(sig1), sjet(sig2)};
  dsig_.resize(N);
  for (std::size_t j = 0; j < N; ++j) dsig_[j] = sjet_[0][j].df;
}

double RadialEnergies::volume_integral(const std::vector<double>& f) const {
  const std::vector<double>& w = S_.simpson();
  double v = 0.0;
  for (std::size_t j = 1; j < f.size(); ++j) v += w[j] * f[j] * s_.x[j] * s_.x[j] * xy_[j];
  return 4 * kPi * v;
}

double RadialEnergies::e0() const {
  const AffineEos& eos = S_.eos();
  std::vector<double> f(s_.nodes());
  for (std::size_t j = 0; j < f.size(); ++j) {
    // (u^tau)^2 = a^2 (u^t)^2 and gbar(u, u) = (u^r)^2 on the flat slices.
    f[j] = eos.eps(s_.sigma[j]) * a2_[j] * ut_[j] * ut_[j] + eos.p(s_.sigma[j]) * ur_[j] * ur_[j];
  }
  return volume_integral(f);
}

EklParts RadialEnergies::e_kl(int k, int l) const {
  if (k < 0 || l < 0 || k + l > 2) throw std::invalid_argument("energies are defined for k + l <= 2");
  const std::size_t N = s_.nodes();
  const BallDomain dom(s_.R());
  const AffineEos& eos = S_.eos();
  std::vector<double> fv(N, 0.0), fs(N, 0.0);
  for (std::size_t j = 1; j < N; ++j) {
    const double x = s_.x[j];
    const double chi = cutoff_chi(s_.R() - x, dom.iota0);
    const double a = std::sqrt(a2_[j]);
    const double weight = std::sqrt(s_.sigma[j]) / (std::abs(ur_[j]) + a * ut_[j]);
    fv[j] = 0.5 * radial_vector_q(vjet_[l][j], x, k_, chi, k) * weight;
    // -V^tau = a V^t.
    fs[j] = 0.25 * eos.de(s_.sigma[j]) * radial_scalar_q(sjet_[l][j], x, chi, k) * a * s_.Vt[j];
  }
  EklParts out;
  out.interior_v = volume_integral(fv);
  out.interior_sigma = volume_integral(fs);
  const double dN = std::abs(dsig_.back());
  if (dN <= delta_floor_) {
    out.boundary_skipped = true;
  } else {
    const double R = s_.R();
    const double q = radial_scalar_q(sjet_[l].back(), R, 1.0, k);
    out.boundary = 0.25 * 4 * kPi * R * R * q * std::sqrt(a2_.back()) * s_.Vt.back() / dN;
  }
  return out;
}

double RadialEnergies::k1() const {
  // curl of the one-form gbar V from the k = 1 spatial block; zero for radial
  // fields up to rounding, evaluated rather than assumed.
  const std::size_t N = s_.nodes();
  std::vector<double> f(N, 0.0);
  for (std::size_t j = 1; j < N; ++j) {
    const std::vector<double> T = radial_vector_derivative(vjet_[0][j], s_.x[j], k_, 1);
    double c2 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int m = 0; m < 3; ++m) {
        const double c = T[i * 4 + 1 + m] - T[m * 4 + 1 + i];
        c2 += c * c;
      }
    f[j] = c2;
  }
  return volume_integral(f);
}

double RadialEnergies::ew(int r) const {
  if (r < 0 || r > 1) throw std::invalid_argument("wave energies are implemented for r <= 1");
  const std::size_t N = s_.nodes();
  const double eta2 = S_.eos().c2();
  const std::vector<double>& Dpsi = r == 0 ? Dsig_ : Ds1_;
  std::vector<double> f(N, 0.0);
  for (std::size_t j = 1; j < N; ++j) {
    const double a = std::sqrt(a2_[j]);
    const double w = s_.Vr[j] / s_.Vt[j];
    const double dr = sjet_[r][j].df;
    const double dt = Dpsi[j] - w * dr;
    const double un = sjet_[r + 1][j].f;  // nabla_u^{r+1} sigma
    // Pi^{mu nu} d psi d psi with Pi = g^{-1} + u u.
    const double pi = -dt * dt / a2_[j] + dr * dr + un * un;
    const double mu = a * ut_[j];  // -u^tau
    f[j] = 0.5 * (un * un + pi / (std::abs(ur_[j]) + mu)) + 0.5 * un * un * (1.0 / eta2 - 1.0) * mu;
  }
  return volume_integral(f);
}

EnergyBreakdown RadialEnergies::breakdown() const {
  EnergyBreakdown b;
  b.t = s_.t;
  b.E0 = e0();
  for (int k = 0; k <= 2; ++k)
    for (int l = 0; k + l <= 2; ++l) b.Ekl[{k, l}] = e_kl(k, l);
  b.K1 = k1();
  b.EW0 = ew(0);
  b.EW1 = ew(1);
  b.E1 = b.Ekl[{0, 0}].total() + b.Ekl[{1, 0}].total() + b.Ekl[{0, 1}].total() + b.K1 + b.EW1;
  const double R = s_.R();
  b.K = std::sqrt(2.0) / R + 1.0 / BallDomain(R).iota0;
  for (double sg : s_.sigma) b.sigma_tilde = std::max(b.sigma_tilde, 1.0 / sg);
  const TaylorMargin tm = taylor_sign_margin(s_.x, s_.sigma, S_.eos());
  b.delta = tm.delta;
  b.delta_prime = tm.delta_prime;
  b.lambda = S_.lambda_max(s_);
  return b;
}

CoercivityReport RadialEnergies::coercivity(int r) const {
  if (r < 0 || r > 1) throw std::invalid_argument("coercivity is reported for r <= 1");
  CoercivityReport c;
  c.r = r;
  const std::size_t N = s_.nodes();
  std::vector<double> f(N, 0.0);
  for (std::size_t j = 1; j < N; ++j) {
    const double x = s_.x[j];
    RadialVectorJet vbar = vjet_[0][j];
    vbar.At = vbar.dAt = vbar.ddAt = 0.0;
    double v = 0.0;
    for (int k = 0; k <= r; ++k) v += radial_vector_q(vbar, x, 0.0, 0.0, k);
    v += sjet_[0][j].df * sjet_[0][j].df;
    if (r == 1) v += radial_scalar_q(sjet_[0][j], x, 0.0, 2);
    f[j] = v;
  }
  c.norms = volume_integral(f);
  if (r == 0) c.energy = e_kl(0, 0).total() + ew(0);
  else c.energy = e_kl(0, 0).total() + e_kl(1, 0).total() + e_kl(0, 1).total() + k1() + ew(1);
  c.ratio = (c.norms == 0.0 && c.energy == 0.0) ? 0.0 : c.norms / c.energy;
  return c;
}

}  // namespace fluidlab
