#ifndef FLUIDLAB_WAVE_HPP_INCLUDED
#define FLUIDLAB_WAVE_HPP_INCLUDED

#include "fluidlab/spacetime.hpp"

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace fluidlab {

// Dirichlet problem eta^-2 nabla_u^2 psi - nabla_mu (Pi^{mu nu} nabla_nu psi) = f
// on a fixed ball with psi = C0 on the boundary, for the static background
// u = tau and spherically symmetric data.
struct WaveProblem {
  SpacetimeChart chart = SpacetimeChart::minkowski();
  double eta2 = 1.0;
  double R = 1.0;
  double C0 = 0.0;
  std::function<double(double r)> psi0;
  std::function<double(double r)> psi1;
  std::function<double(double t, double r)> f;  // empty means f = 0
};

struct WaveHistory {
  std::vector<double> t;
  std::vector<double> energy;      // E_w
  std::vector<double> psi_center;  // psi(t, 0)
  std::vector<double> dpsi_center;
  double frequency = 0.0;          // from the zero crossings of psi(t, 0) - C0
  double energy_drift = 0.0;       // max |E_w(t) - E_w(0)| / E_w(0)
};

// Galerkin solver in the basis sin(m pi r / R) / r, m = 1..modes. The
// semi-discrete system is diagonalized once and advanced exactly; the source
// enters through Simpson's rule on the variation of constants formula, which
// is fourth order in dt.
class WaveSolver {
 public:
  explicit WaveSolver(WaveProblem prob, int modes = 32);

  int modes() const { return modes_; }
  double t() const { return t_; }
  // Highest angular frequency of the discrete system.
  double omega_max() const { return omega_.maxCoeff(); }
  const Eigen::VectorXd& omegas() const { return omega_; }

  void step(double dt);
  WaveHistory solve(double dt, double t_end);

  double psi(double r) const;
  double psi_t(double r) const;
  double energy() const;

 private:
  Eigen::VectorXd source(double t) const;
  Eigen::VectorXd coefficients() const;      // c in psi = C0 + sum c_m phi_m
  Eigen::VectorXd coefficients_t() const;

  WaveProblem p_;
  int modes_;
  double t_ = 0.0;
  std::vector<double> qr_, qw_;  // radial Gauss nodes and 4 pi r^2 weights
  Eigen::MatrixXd phi_, dphi_;   // basis values and r-derivatives at the nodes
  Eigen::MatrixXd V_;            // M-orthonormal eigenvectors
  Eigen::VectorXd omega_;
  Eigen::VectorXd q_, qd_;       // modal coordinates and their time derivatives
};

}  // namespace fluidlab

#endif
