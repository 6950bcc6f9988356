#ifndef FLUIDLAB_TENSOR_HPP_INCLUDED
#define FLUIDLAB_TENSOR_HPP_INCLUDED

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <vector>

namespace fluidlab {

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// Spacetime tensor with components stored slot-major (slot 0 varies slowest).
// Each slot is either an upper (vector) or a lower (covector) index.
struct Tensor {
  std::vector<bool> upper;
  std::vector<double> c;

  Tensor() : c(1, 0.0) {}
  explicit Tensor(std::vector<bool> slots);

  static Tensor scalar(double v);
  static Tensor vector(const Vec4& v);
  static Tensor covector(const Vec4& w);

  int rank() const { return static_cast<int>(upper.size()); }
  std::size_t size() const { return c.size(); }

  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }

  double& at(std::initializer_list<int> idx);
  double at(std::initializer_list<int> idx) const;
};

std::size_t pow4(int r);

// Multi-index of a flat offset, slot 0 first.
void unflatten(std::size_t flat, int rank, int* idx);

// Apply M to a single slot: T'[..a..] = sum_b M(a,b) T[..b..].
Tensor apply_to_slot(const Tensor& t, int slot, const Mat4& m);

// Norm built from a positive definite metric gt (lower components): upper slots
// contract with gt, lower slots with its inverse.
double tensor_norm(const Tensor& t, const Mat4& gt_lower);

}  // namespace fluidlab

#endif
