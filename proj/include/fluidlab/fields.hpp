#ifndef FLUIDLAB_FIELDS_HPP_INCLUDED
#define FLUIDLAB_FIELDS_HPP_INCLUDED

#include "fluidlab/spacetime.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fluidlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidVelocity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SampleKind { RadialGrid, BallLattice, BallGauss, SphereGrid };

// Quadrature sample set on the ball D_t or its boundary sphere (centered at 0).
struct SampleSet {
  SampleKind kind = SampleKind::RadialGrid;
  double radius = 1.0;
  double h = 0.0;
  std::vector<Vec4> points;
  std::vector<double> weights;
  std::vector<char> boundary;

  std::size_t size() const { return points.size(); }
  double total_weight() const;
};

// n + 1 nodes on [0, R] with composite Simpson (n even) or trapezoid weights
// times 4 pi r^2, so sums approximate volume integrals of radial functions.
SampleSet radial_grid(int n, double R);
// Cartesian lattice nodes inside the ball, weight h^3 each.
SampleSet ball_lattice(double R, double h);
// Gauss-Legendre in r and cos(theta), uniform in azimuth.
SampleSet ball_gauss(double R, int nr, int ntheta, int nphi);
// Gauss-Legendre in cos(theta), uniform in azimuth, on the sphere of radius R.
SampleSet sphere_grid(double R, int ntheta, int nphi);

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

using ScalarFn = std::function<double(const Vec4&)>;
using VectorFn = std::function<Vec4(const Vec4&)>;

TensorFn scalar_field(ScalarFn f);
TensorFn vector_field(VectorFn f);

// Default step for pointwise differences of analytic test fields.
inline constexpr double kPointStep = 1e-3;

// Partial derivatives d_mu f by a fourth order central stencil.
Vec4 gradient(const ScalarFn& f, const Vec4& e, double h = kPointStep);

// Matrix (mu, nu) = nabla_mu X^nu.
Mat4 nabla_vector(const SpacetimeChart& chart, const VectorFn& X, const Vec4& e, double h = kPointStep);

double divergence(const SpacetimeChart& chart, const VectorFn& X, const Vec4& e, double h = kPointStep);
// (curl X)_{mu nu} = d_mu zeta_nu - d_nu zeta_mu with zeta = g X.
Mat4 curl4(const SpacetimeChart& chart, const VectorFn& X, const Vec4& e, double h = kPointStep);
// Spatial curl from zeta = gbar X, extended by zero along tau.
Mat4 scurl(const SpacetimeChart& chart, const VectorFn& X, const Vec4& e, double h = kPointStep);

// Matrix (mu, nu) = nabla-bar_mu X^nu = Pi^a_mu Pi^nu_b nabla_a X^b.
Mat4 spatial_derivative(const SpacetimeChart& chart, const VectorFn& X, const Vec4& e, double h = kPointStep);
double sdiv(const SpacetimeChart& chart, const VectorFn& X, const Vec4& e, double h = kPointStep);
// Spatial gradient of a scalar as a covector.
Vec4 spatial_gradient(const SpacetimeChart& chart, const ScalarFn& f, const Vec4& e, double h = kPointStep);
double laplace_beltrami(const SpacetimeChart& chart, const ScalarFn& f, const Vec4& e, double h = kPointStep);

// Checks that u is unit timelike and future directed; throws InvalidVelocity.
void check_velocity(const SpacetimeChart& chart, const Vec4& u, const Vec4& e);

struct VelocitySplit {
  double u_tau;       // tau_mu u^mu (negative)
  Vec4 u_bar;         // spatial projection
  double u_bar_norm;  // sqrt(gbar(u, u))
  double lambda;      // |u_bar| / |u_tau|
};
VelocitySplit split_velocity(const SpacetimeChart& chart, const Vec4& u, const Vec4& e);

double material_derivative(const ScalarFn& f, const Vec4& u, const Vec4& e, double h = kPointStep);
Vec4 material_derivative(const SpacetimeChart& chart, const VectorFn& X, const Vec4& u, const Vec4& e,
                         double h = kPointStep);

// nabla_tau through the decomposition u = u_bar - u_tau tau, i.e.
// nabla_tau = (nabla_u - u_bar^mu nabla_mu) / (-u_tau); never by differencing along tau.
double tau_derivative(const SpacetimeChart& chart, const ScalarFn& f, const VectorFn& u, const Vec4& e,
                      double h = kPointStep);
Vec4 tau_derivative(const SpacetimeChart& chart, const VectorFn& X, const VectorFn& u, const Vec4& e,
                    double h = kPointStep);

// Generic tensor calculus on callables.
Tensor project_spatial(const FoliationFrame& fr, const Tensor& t);
TensorFn spatial_derivative(const SpacetimeChart& chart, TensorFn f, double h = kPointStep);
TensorFn material_derivative(const SpacetimeChart& chart, TensorFn f, VectorFn u, double h = kPointStep);
TensorFn tau_derivative(const SpacetimeChart& chart, TensorFn f, VectorFn u, double h = kPointStep);
double riem_norm(const SpacetimeChart& chart, const Tensor& t, const Vec4& e);

// L2 norms over a sample set.
double l2_norm(const SampleSet& s, const std::function<double(const Vec4&)>& pointwise_norm);
double lp_norm(const SampleSet& s, const std::function<double(const Vec4&)>& pointwise_norm, double p);
double sup_norm(const SampleSet& s, const std::function<double(const Vec4&)>& pointwise_norm);

// sum_{s <= k} || nabla-bar^s T ||_{L2} for a tensor callable.
double sobolev_norm(const SpacetimeChart& chart, const SampleSet& s, const TensorFn& f, int k, double h = kPointStep);

struct MixedNorm {
  int k = 0;
  int l = 0;
  double value = 0.0;
};
// sum_{s <= k, m <= l} || nabla-bar^s nabla_u^m T ||_{L2}.
MixedNorm mixed_norm(const SpacetimeChart& chart, const SampleSet& s, const TensorFn& f, const VectorFn& u, int k,
                     int l, double h = kPointStep);

// One row per sample: coordinates then components.
void write_field_csv(const std::string& path, const SampleSet& s, const std::vector<std::vector<double>>& comps,
                     const std::vector<std::string>& names);

}  // namespace fluidlab

#endif
