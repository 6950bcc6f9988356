#ifndef FLUIDLAB_ENERGIES_HPP_INCLUDED
#define FLUIDLAB_ENERGIES_HPP_INCLUDED

#include "fluidlab/boundary.hpp"
#include "fluidlab/evolve.hpp"

#include <map>
#include <utility>
#include <vector>

namespace fluidlab {

// Q(alpha, beta) = gamma^{i1 j1} ... gamma^{ir jr} alpha_I beta_J for rank-r
// spatial tensors stored slot-major with 3^r components.
double qform(const Mat3& gamma, const double* a, const double* b, int rank);

// Q built from the extended projection of a ball.
struct QForm {
  const BallDomain* dom = nullptr;
  double operator()(const Vec3& x, const double* a, const double* b, int rank) const {
    return qform(dom->gamma_ext(x), a, b, rank);
  }
};

// Value and first two radial derivatives of the (t, r) components of a
// spherically symmetric spacetime vector field A = A^t d_t + A^r d_r.
struct RadialVectorJet {
  double At = 0, dAt = 0, ddAt = 0;
  double Ar = 0, dAr = 0, ddAr = 0;
};

struct RadialScalarJet {
  double f = 0, df = 0, ddf = 0;
};

// Components of nabla-bar^k A at (r, 0, 0), k <= 2: 3^k * 4 entries, derivative
// slots first, the vector index last (t, x, y, z).
std::vector<double> radial_vector_derivative(const RadialVectorJet& A, double r, double k_trap, int k);
std::vector<double> radial_scalar_derivative(const RadialScalarJet& f, double r, int k);

// |nabla-bar^k A|^2 with Q acting on the derivative slots (gamma = I - chi n n)
// and the Riemannian metric tau tau + gbar on the vector index.
double radial_vector_q(const RadialVectorJet& A, double r, double k_trap, double chi, int k);
double radial_scalar_q(const RadialScalarJet& f, double r, double chi, int k);

struct EklParts {
  double interior_v = 0.0;
  double interior_sigma = 0.0;
  double boundary = 0.0;
  bool boundary_skipped = false;  // Taylor margin below the floor
  double total() const { return interior_v + interior_sigma + boundary; }
};

struct EnergyBreakdown {
  double t = 0.0;
  double E0 = 0.0;
  std::map<std::pair<int, int>, EklParts> Ekl;  // k + l <= 2
  double K1 = 0.0;
  double EW0 = 0.0, EW1 = 0.0;
  double E1 = 0.0;  // sum_{k+l<=1} E^{k,l} + K^1 + EW^1
  // Monitors.
  double K = 0.0;            // |theta|_inf + 1 / iota0
  double sigma_tilde = 0.0;  // || 1/sigma ||_inf
  double delta = 0.0;        // Taylor margin -N p
  double delta_prime = 0.0;  // -N sigma
  double lambda = 0.0;       // sup |u-bar| / |u^tau|
};

struct CoercivityReport {
  int r = 1;
  double norms = 0.0;   // ||V-bar||^2_{H^r} + ||grad sigma||^2_{H^r}
  double energy = 0.0;  // E^r
  double ratio = 0.0;   // norms / energy with 0/0 -> 0
};

// Energy functionals of a radial state. Node profiles and their material
// derivatives are evaluated once in the constructor.
class RadialEnergies {
 public:
  RadialEnergies(const RadialSolver& solver, const RadialState& s, double delta_floor = 1e-8);

  double e0() const;
  EklParts e_kl(int k, int l) const;
  double k1() const;
  double ew(int r) const;
  EnergyBreakdown breakdown() const;
  CoercivityReport coercivity(int r) const;

  // Per-node jets, exposed for tests.
  const std::vector<RadialVectorJet>& velocity_jet(int l) const { return vjet_.at(l); }
  const std::vector<RadialScalarJet>& sigma_jet(int l) const { return sjet_.at(l); }

 private:
  double volume_integral(const std::vector<double>& f) const;

  const RadialSolver& S_;
  const RadialState& s_;
  double delta_floor_;
  double k_;
  std::vector<double> a2_, ut_, ur_, xy_, dsig_, Dsig_, Ds1_;
  std::vector<std::vector<RadialVectorJet>> vjet_;  // nabla_u^l V, l = 0, 1, 2
  std::vector<std::vector<RadialScalarJet>> sjet_;  // nabla_u^l sigma, l = 0, 1, 2
};

}  // namespace fluidlab

#endif
