#include "fluidlab/eos.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fluidlab {

AffineEos::AffineEos(double c2, double eps0, double A) : c2_(c2), eps0_(eps0), A_(A) {
  if (!(c2 > 0.0 && c2 <= 1.0)) {
    std::ostringstream os;
    os << "sound speed bound violated: need 0 < c2 <= 1, got c2 = " << c2;
    throw AssumptionViolation(os.str());
  }
  if (!(eps0 > 0.0)) throw AssumptionViolation("liquid boundary energy density must be positive (eps0 > 0)");
  if (!(A > 0.0)) throw AssumptionViolation("integration constant A must be positive");
  const double s = std::pow(eps0 * std::pow(A, 1.0 / c2), c2 / (1.0 + c2));
  sigma0_ = s * s;
  rho0_ = eps0 / s;
  sigma_floor_ = 0.5 * sigma0_;
}

double AffineEos::rho(double sigma) const { return std::pow(std::sqrt(sigma) / A_, 1.0 / c2_); }

double AffineEos::eps(double sigma) const { return (c2_ * eps0_ + rho(sigma) * std::sqrt(sigma)) / (1.0 + c2_); }

double AffineEos::p(double sigma) const { return c2_ * (rho(sigma) * std::sqrt(sigma) - eps0_) / (1.0 + c2_); }

Thermo AffineEos::thermo(double sigma) const {
  check_sigma(sigma);
  const double r = rho(sigma);
  const double m = r * std::sqrt(sigma);
  return {c2_ * (m - eps0_) / (1.0 + c2_), r, (c2_ * eps0_ + m) / (1.0 + c2_)};
}

double AffineEos::sigma_from_rho(double r) const {
  const double s = A_ * std::pow(r, c2_);
  return s * s;
}

double AffineEos::sigma_from_eps(double e) const {
  // rho sqrt(sigma) = (1 + c2) eps - c2 eps0 = A^(-1/c2) sigma^((1 + 1/c2) / 2)
  const double m = (1.0 + c2_) * e - c2_ * eps0_;
  return std::pow(m * std::pow(A_, 1.0 / c2_), 2.0 * c2_ / (1.0 + c2_));
}

double AffineEos::sigma_from_p(double pr) const { return sigma_from_eps(pr / c2_ + eps0_); }

double AffineEos::e(double sigma) const {
  return 0.5 * (1.0 / c2_ - 1.0) * std::log(sigma) - std::log(A_) / c2_;
}

double AffineEos::de(double sigma) const { return (1.0 / c2_ - 1.0) / (2.0 * sigma); }

double AffineEos::d2e(double sigma) const { return -(1.0 / c2_ - 1.0) / (2.0 * sigma * sigma); }

double AffineEos::dsigma_dp(double sigma) const { return 2.0 * std::sqrt(sigma) / rho(sigma); }

void AffineEos::check_sigma(double sigma) const {
  if (!(sigma >= sigma_floor_)) {
    std::ostringstream os;
    os << "enthalpy lower bound violated: sigma = " << sigma << " below floor " << sigma_floor_;
    throw AssumptionViolation(os.str());
  }
}

double de_numeric(const AffineEos& eos, double sigma, double h) {
  const double hs = h * sigma;
  return (-eos.e(sigma + 2 * hs) + 8 * eos.e(sigma + hs) - 8 * eos.e(sigma - hs) + eos.e(sigma - 2 * hs)) / (12 * hs);
}

namespace {

// k-th derivative of p with respect to eps by repeated central differences.
double dp_deps(const AffineEos& eos, double e0, int k, double h) {
  if (k == 0) return eos.p(eos.sigma_from_eps(e0));
  return (dp_deps(eos, e0 + h, k - 1, h) - dp_deps(eos, e0 - h, k - 1, h)) / (2.0 * h);
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

EosReport validate_assumptions(const AffineEos& eos, double sigma_lo, double sigma_hi, int N, int samples) {
  if (!(sigma_lo > 0.0 && sigma_hi > sigma_lo)) throw std::invalid_argument("sigma range must be positive and increasing");
  EosReport rep;
  rep.dp_sup.assign(static_cast<std::size_t>(N), 0.0);
  rep.L2 = 1e300;
  rep.L3_floor = eos.sigma_floor();
  const double a = 0.5 * (1.0 / eos.c2() - 1.0);
  for (int i = 0; i < samples; ++i) {
    const double s = sigma_lo + (sigma_hi - sigma_lo) * i / (samples - 1);
    const double e0 = eos.eps(s);
    const double h = 1e-2 * std::max(1.0, e0);
    for (int k = 1; k <= N; ++k) {
      const double v = std::abs(dp_deps(eos, e0, k, h));
      rep.dp_sup[k - 1] = std::max(rep.dp_sup[k - 1], v);
    }
    rep.L2 = std::min(rep.L2, eos.eta2(s));
    rep.eta2_max = std::max(rep.eta2_max, eos.eta2(s));
    // d^k e / d sigma^k = a (-1)^(k-1) (k-1)! / sigma^k
    for (int k = 1; k <= N; ++k) {
      const double dk = std::abs(a) * factorial(k - 1) / std::pow(s, k);
      rep.e_sup_bound = std::max(rep.e_sup_bound, dk);
      const double ev = std::abs(eos.e(s));
      if (ev > 0.0) rep.e_rel_bound = std::max(rep.e_rel_bound, dk / ev);
    }
  }
  // Finite differences of an affine map leave round-off only.
  for (double& v : rep.dp_sup)
    if (v < 1e-6) v = 0.0;
  rep.L1 = *std::max_element(rep.dp_sup.begin(), rep.dp_sup.end());

  auto add = [&](std::string name, double value, bool pass, std::string note) {
    rep.checks.push_back({std::move(name), value, pass, std::move(note)});
    rep.all_pass = rep.all_pass && pass;
  };
  add("barotropic derivative bound", rep.L1, std::isfinite(rep.L1), "sup |d^k p/d eps^k| for 1 <= k <= N");
  add("sound speed bound", rep.L2, rep.L2 > 0.0 && rep.eta2_max <= 1.0, "0 < L2 <= eta^2 <= 1");
  add("enthalpy lower bound", sigma_lo, sigma_lo >= eos.sigma_floor(), "sigma stays above the floor");
  add("enthalpy coercivity bound", rep.e_sup_bound, std::isfinite(rep.e_sup_bound),
      "derivatives of e(sigma) bounded on the range");
  add("liquid boundary", eos.rho0(), eos.rho0() > 0.0 && eos.eps0() > 0.0 && std::abs(eos.p(eos.sigma0())) < 1e-12,
      "p(sigma0) = 0 with rho0 > 0 and eps0 > 0");
  return rep;
}

}  // namespace fluidlab
