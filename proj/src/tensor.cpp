#include "fluidlab/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace fluidlab {

std::size_t pow4(int r) {
  std::size_t n = 1;
  for (int i = 0; i < r; ++i) n *= 4;
  return n;
}

Tensor::Tensor(std::vector<bool> slots) : upper(std::move(slots)), c(pow4(static_cast<int>(upper.size())), 0.0) {}

Tensor Tensor::scalar(double v) {
  Tensor t;
  t.c[0] = v;
  return t;
}

Tensor Tensor::vector(const Vec4& v) {
  Tensor t({true});
  for (int i = 0; i < 4; ++i) t.c[i] = v[i];
  return t;
}

Tensor Tensor::covector(const Vec4& w) {
  Tensor t({false});
  for (int i = 0; i < 4; ++i) t.c[i] = w[i];
  return t;
}

static std::size_t offset_of(std::initializer_list<int> idx, int rank) {
  if (static_cast<int>(idx.size()) != rank) throw std::invalid_argument("tensor index arity mismatch");
  std::size_t off = 0;
  for (int i : idx) off = off * 4 + static_cast<std::size_t>(i);
  return off;
}

double& Tensor::at(std::initializer_list<int> idx) { return c[offset_of(idx, rank())]; }
double Tensor::at(std::initializer_list<int> idx) const { return c[offset_of(idx, rank())]; }

void unflatten(std::size_t flat, int rank, int* idx) {
  for (int s = rank - 1; s >= 0; --s) {
    idx[s] = static_cast<int>(flat % 4);
    flat /= 4;
  }
}

Tensor apply_to_slot(const Tensor& t, int slot, const Mat4& m) {
  Tensor out(t.upper);
  const int r = t.rank();
  const std::size_t stride = pow4(r - slot - 1);
  for (std::size_t f = 0; f < t.size(); ++f) {
    const int a = static_cast<int>((f / stride) % 4);
    const std::size_t base = f - static_cast<std::size_t>(a) * stride;
    double s = 0.0;
    for (int b = 0; b < 4; ++b) s += m(a, b) * t.c[base + static_cast<std::size_t>(b) * stride];
    out.c[f] = s;
  }
  return out;
}

double tensor_norm(const Tensor& t, const Mat4& gt_lower) {
  // Orthonormalize every slot: with gt = L L^T an upper index maps by L^T,
  // a lower index by L^{-1}; the norm is then the plain sum of squares.
  Eigen::LLT<Mat4> llt(gt_lower);
  if (llt.info() != Eigen::Success) throw std::runtime_error("norm metric is not positive definite");
  const Mat4 L = llt.matrixL();
  const Mat4 up = L.transpose();
  const Mat4 lo = L.inverse();
  Tensor w = t;
  for (int s = 0; s < t.rank(); ++s) w = apply_to_slot(w, s, t.upper[s] ? up : lo);
  double sum = 0.0;
  for (double v : w.c) sum += v * v;
  return std::sqrt(sum);
}

}  // namespace fluidlab
