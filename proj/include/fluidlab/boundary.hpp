#ifndef FLUIDLAB_BOUNDARY_HPP_INCLUDED
#define FLUIDLAB_BOUNDARY_HPP_INCLUDED

#include "fluidlab/eos.hpp"
#include "fluidlab/lattice.hpp"
#include "fluidlab/spacetime.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace fluidlab {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quintic smoothstep: 1 for d <= iota0/4, 0 for d >= iota0/2, C^2 in between.
double cutoff_chi(double d, double iota0);

// Ball of radius R centered at the origin of a flat time slice.
struct BallDomain {
  double R = 1.0;
  double iota0 = 1.0;  // normal injectivity radius of a sphere

  explicit BallDomain(double radius);

  double distance(const Vec3& x) const;
  double chi(const Vec3& x) const { return cutoff_chi(distance(x), iota0); }
  // Extended unit normal x/|x|; zero at the center, where chi vanishes anyway.
  Vec3 normal_ext(const Vec3& x) const;
  // delta - chi n n; equals the extended gamma^{ij} as well since gbar = delta.
  Mat3 proj_ext(const Vec3& x) const;
  Mat3 gamma_ext(const Vec3& x) const { return proj_ext(x); }
};

// Apply the extended projection to every slot of a lattice tensor.
LatticeField project_all(const LatticeField& f, const BallDomain& dom);
// Boundary derivative: extended projection of grad.
LatticeField boundary_grad(const LatticeField& f, const BallDomain& dom);

struct SecondFundamentalFormReport {
  double theta_max = 0.0;      // sup |theta| on the sphere samples
  double theta_l2 = 0.0;       // ||theta||_{L2(boundary)}
  double theta_h1 = 0.0;       // ||theta||_{L2} + ||boundary grad theta||_{L2}
  double trace_mean = 0.0;     // average of tr theta
  double K = 0.0;              // theta_max + 1/iota0
  double symmetry_err = 0.0;   // max |theta - theta^T|
  double analytic_err = 0.0;   // max |theta - gamma/R|
  double normal_err = 0.0;     // max |gbar^{ij} N_i N_j - 1|
  double proj_normal_err = 0.0;  // max |Pi N|
};

// theta = Pi (D N) Pi with N the unit normal of the level set r - R, built on
// a lattice of spacing h and interpolated to a sphere grid.
SecondFundamentalFormReport second_fundamental_form(const BallDomain& dom, const SpacetimeChart& chart, double h,
                                                    int ntheta = 16, int nphi = 32);

struct ProjectionIdentityReport {
  std::vector<double> h;
  std::vector<double> residual;  // sup over sphere samples of |Pi D^2 q Pi - theta D_N q|
  double order = 0.0;            // least squares slope of log residual vs log h
};

using Scalar3Fn = std::function<double(const Vec3&)>;

ProjectionIdentityReport projection_identity_check(const BallDomain& dom, const SpacetimeChart& chart,
                                                   const Scalar3Fn& q, const std::vector<double>& hs,
                                                   int ntheta = 16, int nphi = 32);

struct TaylorMargin {
  double delta = 0.0;        // -N p at the boundary
  double delta_prime = 0.0;  // -N sigma at the boundary
  bool degenerate = true;
};

// Radial profile on (possibly nonuniform) nodes, boundary at the last node.
TaylorMargin taylor_sign_margin(const std::vector<double>& x, const std::vector<double>& sigma, const AffineEos& eos);

struct DgamReport {
  double dgamma_sup = 0.0;
  double theta_sup = 0.0;
  double constant = 0.0;  // dgamma_sup / (theta_sup + 1/iota0)
};
DgamReport dgam_constant(const BallDomain& dom, double h);

// Least squares slope of log(err) against log(h).
double fit_order(const std::vector<double>& h, const std::vector<double>& err);

}  // namespace fluidlab

#endif
