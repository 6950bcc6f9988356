#ifndef FLUIDLAB_EVOLVE_HPP_INCLUDED
#define FLUIDLAB_EVOLVE_HPP_INCLUDED

#include "fluidlab/eos.hpp"
#include "fluidlab/spacetime.hpp"

#include <stdexcept>
#include <vector>

namespace fluidlab {

class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Spherically symmetric Lagrangian state. Node j carries the label
// y_j = j R0 / n; node 0 is the center, node n the free boundary.
struct RadialState {
  double t = 0.0;
  std::vector<double> x;      // radial positions
  std::vector<double> sigma;  // enthalpy
  std::vector<double> Vr;     // V^r
  std::vector<double> Vt;     // V^t
  std::vector<double> J;      // volume density sqrt(det gbar) in label coordinates
  double exchange = 0.0;      // int T^{mu nu} nabla_mu tau_nu dvol; E0 + exchange is conserved

  std::size_t nodes() const { return x.size(); }
  double R() const { return x.back(); }
};

// Time derivatives along the node paths.
struct RadialRhs {
  std::vector<double> x, sigma, Vr, Vt, J;
  double exchange = 0.0;
};

struct StepInfo {
  double constraint_drift = 0.0;  // max |a^2 Vt^2 - sigma - Vr^2| before projection
};

struct ResidualReport {
  double wave = 0.0;             // L2 residual of the enthalpy wave equation
  double constraint = 0.0;       // max |sigma + g(V, V)|
  double boundary_p = 0.0;       // |p| at the boundary node
  double normal_velocity = 0.0;  // |N_mu V^mu| at the boundary
  double sdiv_gap = 0.0;         // max |div-bar V - div V - tau_mu nabla_tau V^mu|
  double he_mom1 = 0.0;          // L2 of the radial component of nabla_V D V + D^2 sigma / 2
  double he_mass1 = 0.0;         // L2 of the radial component of D div V + e' nabla_V D sigma
  std::vector<double> wave_profile;  // pointwise wave residual per node (0 at center and boundary)
};

class RadialSolver {
 public:
  RadialSolver(SpacetimeChart chart, AffineEos eos, int n, double R0);

  const SpacetimeChart& chart() const { return chart_; }
  const AffineEos& eos() const { return eos_; }
  int n() const { return n_; }
  double R0() const { return R0_; }
  double dy() const { return R0_ / n_; }
  double label(int j) const { return j * dy(); }

  // sigma = sigma0 a(R)^2 / a(r)^2, V^r = 0, i.e. u parallel to tau.
  RadialState hydrostatic() const;
  // Hydrostatic state with sigma multiplied by 1 + amp sinc(mode pi r / R).
  RadialState perturbed(double amp, int mode = 1) const;

  RadialRhs rhs(const RadialState& s) const;
  // One RK4 step followed by the projection Vt = sqrt(sigma + Vr^2) / a.
  StepInfo step(RadialState& s, double dt) const;
  // dt = cfl * (R0 / n) / (eta * max lapse)
  double cfl_dt(double cfl = 0.5) const;
  // Travel time estimate 2 int_0^R dr / (eta a(r)).
  double acoustic_period() const;

  // Diagnostics on a state.
  double lapse2(double r) const { return 1.0 + chart_.k() * r * r; }
  double constraint_violation(const RadialState& s) const;
  double lambda_max(const RadialState& s) const;
  double volume_ode(const RadialState& s) const;   // 4 pi int J y^2 dy
  double volume_mesh(const RadialState& s) const;  // 4 pi R^3 / 3
  // Label-space radial derivative helpers (parity +1 even, -1 odd about the center).
  std::vector<double> dlabel(const std::vector<double>& f, int parity) const;
  std::vector<double> dradial(const RadialState& s, const std::vector<double>& f, int parity) const;
  // r^-2 d/dr F for F = r^2 X with X odd, differenced in the volume coordinate
  // r^3 / 3. Second order uniformly up to the center.
  std::vector<double> dvolume(const RadialState& s, const std::vector<double>& F) const;
  // Simpson weights in the label coordinate.
  const std::vector<double>& simpson() const { return simpson_; }

  // Derivative of a state functional along the flow, by a central difference
  // of size eps in state space in the direction of the right-hand side.
  template <class F>
  auto flow_derivative(const RadialState& s, const F& f, double eps = 1e-6) const {
    const RadialRhs r = rhs(s);
    RadialState p = s, m = s;
    for (std::size_t j = 0; j < s.nodes(); ++j) {
      p.x[j] += eps * r.x[j];
      m.x[j] -= eps * r.x[j];
      p.sigma[j] += eps * r.sigma[j];
      m.sigma[j] -= eps * r.sigma[j];
      p.Vr[j] += eps * r.Vr[j];
      m.Vr[j] -= eps * r.Vr[j];
      p.Vt[j] += eps * r.Vt[j];
      m.Vt[j] -= eps * r.Vt[j];
    }
    p.t += eps;
    m.t -= eps;
    auto fp = f(p);
    auto fm = f(m);
    for (std::size_t i = 0; i < fp.size(); ++i) fp[i] = (fp[i] - fm[i]) / (2 * eps);
    return fp;
  }

  ResidualReport residuals(const RadialState& s) const;

  // Tangential inverse metric coefficient of the boundary sphere in label
  // coordinates, gamma^{ab} = (R0 / R)^2 (delta - y y / |y|^2).
  double gamma_coefficient(const RadialState& s) const;
  // |d/dt gamma + gamma gamma h| with d/dt by a flow derivative and h from the
  // node velocity; rounding-level for the exact flow.
  double dtgam_residual(const RadialState& s) const;
  // Same identity with d/dt replaced by a forward difference between two states.
  double dtgam_residual_fd(const RadialState& s0, const RadialState& s1) const;

  // Energy exchange rate int T^{mu nu} nabla_mu tau_nu over the slice.
  double exchange_rate(const RadialState& s) const;

 private:
  SpacetimeChart chart_;
  AffineEos eos_;
  int n_;
  double R0_;
  std::vector<double> simpson_;
};

}  // namespace fluidlab

#endif
