#ifndef FLUIDLAB_SPACETIME_HPP_INCLUDED
#define FLUIDLAB_SPACETIME_HPP_INCLUDED

#include "fluidlab/tensor.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace fluidlab {

class ChartDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ChartKind { Minkowski, HarmonicTrap };

// G[b][a][n] = Gamma^b_{an}
struct Christoffel {
  double G[4][4][4];
};

// dG[m][b][a][n] = d_m Gamma^b_{an}
struct ChristoffelDerivative {
  double dG[4][4][4][4];
};

// R[m][n][a][b] = Rm_{mna}^b, with [nabla_m, nabla_n] w_a = Rm_{mna}^b w_b.
struct Riemann {
  double R[4][4][4][4];
};

struct FoliationFrame {
  Vec4 tau_lower;
  Vec4 tau_upper;
  Mat4 g_lower;
  Mat4 g_upper;
  Mat4 gbar_lower;
  Mat4 gbar_upper;
  Mat4 spatial_proj;  // (mu, nu) entry is Pi^mu_nu
  Mat4 riem_lower;
  Mat4 riem_upper;
};

// Static charts g = -(1 + 2 phi) dt^2 + dx^2 with phi = k |x|^2 / 2 (k = 0 is flat).
class SpacetimeChart {
 public:
  static SpacetimeChart minkowski();
  static SpacetimeChart harmonic_trap(double k);

  ChartKind kind() const { return kind_; }
  double k() const { return k_; }
  std::string name() const;

  // Metric components do not depend on t for either chart.
  bool stationary() const { return true; }

  double phi(const Vec4& e) const;
  // Squared lapse 1 + 2 phi.
  double lapse2(const Vec4& e) const;

  void check_event(const Vec4& e) const;

  Mat4 metric(const Vec4& e) const;
  Mat4 inverse_metric(const Vec4& e) const;
  Christoffel christoffel(const Vec4& e) const;
  ChristoffelDerivative christoffel_derivative(const Vec4& e) const;
  Riemann riemann(const Vec4& e) const;
  // Ric_{na} = Rm_{nma}^m
  Mat4 ricci(const Vec4& e) const;

 private:
  SpacetimeChart(ChartKind kind, double k) : kind_(kind), k_(k) {}
  ChartKind kind_;
  double k_;
};

FoliationFrame frame_at(const SpacetimeChart& chart, const Vec4& e);

// Signature check by eigenvalues: exactly one negative, three positive.
bool lorentzian_signature(const Mat4& g);

using TensorFn = std::function<Tensor(const Vec4&)>;

// Covariant derivative by central differences of the components (order 2 or 4)
// plus Christoffel terms; the derivative slot is prepended as a lower index.
Tensor covariant_derivative_at(const SpacetimeChart& chart, const TensorFn& f, const Vec4& e, double h, int order = 2);
TensorFn covariant_derivative(const SpacetimeChart& chart, TensorFn f, double h, int order = 2);

Tensor riemann_tensor(const SpacetimeChart& chart, const Vec4& e);
Tensor tau_tensor(const SpacetimeChart& chart, const Vec4& e);

struct CurvatureReport {
  double R = 0.0;
  std::vector<double> rm_terms;   // max over samples of |nabla^s Rm|, s = 0..N
  std::vector<double> tau_terms;  // max over samples of |nabla^s tau|, s = 1..N
};

// R = max over samples of sum_{s<=N} |nabla^s Rm| + sum_{1<=s<=N} |nabla^s tau|,
// derivatives by nested central differences of spacing h.
CurvatureReport curvature_report(const SpacetimeChart& chart, const std::vector<Vec4>& samples, int N = 2,
                                 double h = 1e-3);

}  // namespace fluidlab

#endif
