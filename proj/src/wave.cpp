#include "fluidlab/wave.hpp"

#include "fluidlab/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace fluidlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double basis(double k, double r) {
  const double z = k * r;
  if (z < 1e-4) return k * (1.0 - z * z / 6.0);
  return std::sin(z) / r;
}

double dbasis(double k, double r) {
  const double z = k * r;
  if (z < 1e-3) return k * k * k * r * (-1.0 / 3.0 + z * z / 30.0);
  return (z * std::cos(z) - std::sin(z)) / (r * r);
}

}  // namespace

WaveSolver::WaveSolver(WaveProblem prob, int modes) : p_(std::move(prob)), modes_(modes) {
  if (modes_ < 1) throw ConfigError("wave solver needs at least one mode");
  if (!(p_.R > 0.0)) throw ConfigError("wave problem radius must be positive");
  if (!(p_.eta2 > 0.0 && p_.eta2 <= 1.0)) throw ConfigError("sound speed bound: wave speed must satisfy 0 < eta^2 <= 1");
  if (!p_.psi0 || !p_.psi1) throw ConfigError("wave problem needs initial data psi0 and psi1");
  if (std::abs(p_.psi0(p_.R) - p_.C0) > 1e-10)
    throw ConfigError("initial data incompatible with the boundary value: psi0(R) != C0");

  const int nq = 4 * modes_ + 16;
  std::vector<double> x, w;
  gauss_legendre(nq, x, w);
  qr_.resize(nq);
  qw_.resize(nq);
  phi_.resize(nq, modes_);
  dphi_.resize(nq, modes_);
  for (int i = 0; i < nq; ++i) {
    const double r = 0.5 * p_.R * (x[i] + 1.0);
    qr_[i] = r;
    qw_[i] = 0.5 * p_.R * w[i] * 4 * kPi * r * r;
    for (int m = 0; m < modes_; ++m) {
      const double k = (m + 1) * kPi / p_.R;
      phi_(i, m) = basis(k, r);
      dphi_(i, m) = dbasis(k, r);
    }
  }
  // Static u = tau: eta^-2 psi_tt / a^2 - a^-1 div(a grad psi) = f. Multiplied
  // by a this is symmetric: M = int eta^-2 / a phi phi, K = int a phi' phi'.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(modes_, modes_), K = M;
  Eigen::VectorXd b0 = Eigen::VectorXd::Zero(modes_), b1 = b0;
  for (int i = 0; i < nq; ++i) {
    const double a = std::sqrt(p_.chart.lapse2({0.0, qr_[i], 0.0, 0.0}));
    const double mw = qw_[i] / (p_.eta2 * a);
    M.noalias() += mw * phi_.row(i).transpose() * phi_.row(i);
    K.noalias() += qw_[i] * a * dphi_.row(i).transpose() * dphi_.row(i);
    b0 += mw * (p_.psi0(qr_[i]) - p_.C0) * phi_.row(i).transpose();
    b1 += mw * p_.psi1(qr_[i]) * phi_.row(i).transpose();
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
  if (es.info() != Eigen::Success) throw std::runtime_error("wave solver: modal decomposition failed");
  V_ = es.eigenvectors();
  omega_ = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  // c = V q with V^T M V = I, so q = V^T M c = V^T b.
  q_ = V_.transpose() * b0;
  qd_ = V_.transpose() * b1;
}

Eigen::VectorXd WaveSolver::source(double t) const {
  Eigen::VectorXd F = Eigen::VectorXd::Zero(modes_);
  if (!p_.f) return F;
  for (std::size_t i = 0; i < qr_.size(); ++i) {
    const double a = std::sqrt(p_.chart.lapse2({t, qr_[i], 0.0, 0.0}));
    F += qw_[i] * a * p_.f(t, qr_[i]) * phi_.row(static_cast<Eigen::Index>(i)).transpose();
  }
  return V_.transpose() * F;
}

void WaveSolver::step(double dt) {
  if (!(dt > 0.0)) throw ConfigError("wave time step must be positive");
  if (dt * omega_max() > kPi)
    throw ConfigError("wave time step does not resolve the highest retained mode (dt * omega_max > pi)");
  const bool forced = static_cast<bool>(p_.f);
  Eigen::VectorXd g0, gh, g1;
  if (forced) {
    g0 = source(t_);
    gh = source(t_ + 0.5 * dt);
    g1 = source(t_ + dt);
  }
  for (int m = 0; m < modes_; ++m) {
    const double w = omega_(m);
    const double c = std::cos(w * dt), s = std::sin(w * dt);
    const double sinc = w > 0 ? s / w : dt;
    double q = c * q_(m) + sinc * qd_(m);
    double qd = -w * s * q_(m) + c * qd_(m);
    if (forced) {
      const double sh = w > 0 ? std::sin(0.5 * w * dt) / w : 0.5 * dt;
      q += dt / 6.0 * (sinc * g0(m) + 4.0 * sh * gh(m));
      qd += dt / 6.0 * (c * g0(m) + 4.0 * std::cos(0.5 * w * dt) * gh(m) + g1(m));
    }
    q_(m) = q;
    qd_(m) = qd;
  }
  t_ += dt;
}

Eigen::VectorXd WaveSolver::coefficients() const { return V_ * q_; }
Eigen::VectorXd WaveSolver::coefficients_t() const { return V_ * qd_; }

double WaveSolver::psi(double r) const {
  const Eigen::VectorXd c = coefficients();
  double v = p_.C0;
  for (int m = 0; m < modes_; ++m) v += c(m) * basis((m + 1) * kPi / p_.R, r);
  return v;
}

double WaveSolver::psi_t(double r) const {
  const Eigen::VectorXd c = coefficients_t();
  double v = 0.0;
  for (int m = 0; m < modes_; ++m) v += c(m) * basis((m + 1) * kPi / p_.R, r);
  return v;
}

double WaveSolver::energy() const {
  // E_w for u = tau: |u-bar| = 0, u^tau = -1, nabla_u psi = psi_t / a and
  // Pi(d psi, d psi) = psi_r^2, so E_w = 1/2 int eta^-2 psi_t^2 / a^2 + psi_r^2.
  const Eigen::VectorXd pt = phi_ * coefficients_t();
  const Eigen::VectorXd pr = dphi_ * coefficients();
  double e = 0.0;
  for (std::size_t i = 0; i < qr_.size(); ++i) {
    const double a2 = p_.chart.lapse2({t_, qr_[i], 0.0, 0.0});
    const Eigen::Index k = static_cast<Eigen::Index>(i);
    e += qw_[i] * 0.5 * (pt(k) * pt(k) / (p_.eta2 * a2) + pr(k) * pr(k));
  }
  return e;
}

WaveHistory WaveSolver::solve(double dt, double t_end) {
  WaveHistory h;
  auto record = [&]() {
    h.t.push_back(t_);
    h.energy.push_back(energy());
    h.psi_center.push_back(psi(0.0) - p_.C0);
    h.dpsi_center.push_back(psi_t(0.0));
  };
  record();
  const long steps = std::lround(std::ceil((t_end - t_) / dt - 1e-12));
  for (long i = 0; i < steps; ++i) {
    step(dt);
    record();
  }
  const double E0 = h.energy.front();
  for (double e : h.energy) h.energy_drift = std::max(h.energy_drift, E0 > 0 ? std::abs(e - E0) / E0 : std::abs(e));
  // Zero crossings located on the cubic Hermite interpolant of psi(t, 0).
  std::vector<double> cross;
  for (std::size_t i = 1; i < h.t.size(); ++i) {
    const double y0 = h.psi_center[i - 1], y1 = h.psi_center[i];
    // A sample that lands exactly on zero is the crossing; it is recorded once.
    if (y0 == 0.0) continue;
    if (y1 == 0.0) {
      cross.push_back(h.t[i]);
      continue;
    }
    if ((y0 > 0) == (y1 > 0)) continue;
    const double d = h.t[i] - h.t[i - 1];
    const double m0 = h.dpsi_center[i - 1] * d, m1 = h.dpsi_center[i] * d;
    auto H = [&](double s) {
      const double s2 = s * s, s3 = s2 * s;
      return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * m1;
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((H(mid) > 0) == (y0 > 0)) lo = mid;
      else hi = mid;
    }
    cross.push_back(h.t[i - 1] + 0.5 * (lo + hi) * d);
  }
  if (cross.size() >= 2) {
    const double half = (cross.back() - cross.front()) / static_cast<double>(cross.size() - 1);
    h.frequency = kPi / half;
  }
  return h;
}

}  // namespace fluidlab
