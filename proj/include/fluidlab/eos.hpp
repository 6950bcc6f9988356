#ifndef FLUIDLAB_EOS_HPP_INCLUDED
#define FLUIDLAB_EOS_HPP_INCLUDED

#include <stdexcept>
#include <string>
#include <vector>

namespace fluidlab {

class AssumptionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Thermo {
  double p;
  double rho;
  double eps;
};

// Affine barotropic liquid p = c2 (eps - eps0). Integrating
// d eps / d rho = (eps + p) / rho gives
//   eps = c2 eps0 / (1 + c2) + A rho^(1 + c2) / (1 + c2),  sqrt(sigma) = A rho^c2,
// so every thermodynamic quantity is an explicit function of the enthalpy sigma.
// c2 = 1 is the stiff two-phase model.
class AffineEos {
 public:
  AffineEos(double c2, double eps0, double A);

  double c2() const { return c2_; }
  double eps0() const { return eps0_; }
  double A() const { return A_; }

  double sigma0() const { return sigma0_; }
  double rho0() const { return rho0_; }
  // Enthalpy floor used by the lower-bound assumption (default sigma0 / 2).
  double sigma_floor() const { return sigma_floor_; }
  void set_sigma_floor(double s) { sigma_floor_ = s; }

  double rho(double sigma) const;
  double eps(double sigma) const;
  double p(double sigma) const;
  Thermo thermo(double sigma) const;
  // Inverse maps.
  double sigma_from_rho(double rho) const;
  double sigma_from_eps(double eps) const;
  double sigma_from_p(double p) const;

  double e(double sigma) const;
  double de(double sigma) const;   // (eta^-2 - 1) / (2 sigma)
  double d2e(double sigma) const;
  double eta2(double sigma) const { (void)sigma; return c2_; }
  double dsigma_dp(double sigma) const;

  // Throws AssumptionViolation below the floor.
  void check_sigma(double sigma) const;

 private:
  double c2_, eps0_, A_;
  double rho0_, sigma0_, sigma_floor_;
};

struct AssumptionCheck {
  std::string name;
  double value;
  bool pass;
  std::string note;
};

struct EosReport {
  double L1 = 0.0;             // sup |d^k p / d eps^k|, 1 <= k <= N
  double L2 = 0.0;             // inf eta^2
  double eta2_max = 0.0;
  double L3_floor = 0.0;       // enthalpy floor
  double e_sup_bound = 0.0;    // sup_k sup |d^k e / d sigma^k|, 1 <= k <= N
  double e_rel_bound = 0.0;    // the same measured relative to |e(sigma)|
  std::vector<double> dp_sup;  // per derivative order
  std::vector<AssumptionCheck> checks;
  bool all_pass = true;
};

EosReport validate_assumptions(const AffineEos& eos, double sigma_lo, double sigma_hi, int N = 4, int samples = 200);

// Numeric derivative of e(sigma) by a fourth order central stencil.
double de_numeric(const AffineEos& eos, double sigma, double h = 1e-4);

}  // namespace fluidlab

#endif
