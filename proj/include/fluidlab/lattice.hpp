#ifndef FLUIDLAB_LATTICE_HPP_INCLUDED
#define FLUIDLAB_LATTICE_HPP_INCLUDED

#include "fluidlab/tensor.hpp"

#include <functional>
#include <vector>

namespace fluidlab {

// Cartesian lattice on the cube [-m h, m h]^3 used for static 3-D fields on a
// time slice. The slices of both built-in charts are flat, so spatial tensors
// carry Euclidean components and nabla-bar is the flat derivative.
struct Lattice3 {
  double h = 0.1;
  int m = 0;
  int n = 1;  // nodes per axis, 2m + 1

  // Covers the ball of radius R with `margin` extra layers of nodes.
  static Lattice3 covering(double R, double h, int margin = 6);

  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
  Vec3 coord(int i, int j, int k) const { return {(i - m) * h, (j - m) * h, (k - m) * h}; }
};

std::size_t pow3(int r);

// Rank-r spatial tensor with 3^r components per node, slot 0 slowest.
struct LatticeField {
  const Lattice3* lat = nullptr;
  int rank = 0;
  std::vector<double> v;

  std::size_t ncomp() const { return pow3(rank); }
  double* at(std::size_t node) { return v.data() + node * ncomp(); }
  const double* at(std::size_t node) const { return v.data() + node * ncomp(); }
};

using ComponentFn = std::function<void(const Vec3&, double*)>;

LatticeField sample(const Lattice3& lat, int rank, const ComponentFn& f);
LatticeField sample_scalar(const Lattice3& lat, const std::function<double(const Vec3&)>& f);

// D_i T: derivative slot prepended; central differences inside, second order
// one-sided stencils on the faces of the cube.
LatticeField grad(const LatticeField& f);
// Trace over slots a and b (a < b).
LatticeField trace(const LatticeField& f, int a, int b);
LatticeField add(const LatticeField& a, const LatticeField& b, double cb = 1.0);

// Tricubic Lagrange interpolation weights for a fixed list of points.
class Interpolator {
 public:
  Interpolator(const Lattice3& lat, const std::vector<Vec3>& points);
  std::size_t size() const { return idx_.size(); }
  void eval(const LatticeField& f, std::size_t p, double* out) const;
  std::vector<double> eval(const LatticeField& f, std::size_t p) const;

 private:
  std::vector<std::array<std::size_t, 64>> idx_;
  std::vector<std::array<double, 64>> w_;
};

}  // namespace fluidlab

#endif
