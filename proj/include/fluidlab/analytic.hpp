#ifndef FLUIDLAB_ANALYTIC_HPP_INCLUDED
#define FLUIDLAB_ANALYTIC_HPP_INCLUDED

#include "fluidlab/tensor.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fluidlab {

struct Monomial {
  double c = 0.0;
  std::array<int, 3> e{0, 0, 0};
};

// A sin(k . x + phase)
struct TrigFactor {
  double A = 1.0;
  Vec3 k{0.0, 0.0, 0.0};
  double phase = 0.0;
};

// polynomial(x) * (trig ? A sin(k . x + phase) : 1)
struct AnalyticTerm {
  std::vector<Monomial> poly;
  bool trig = false;
  TrigFactor w;
};

// Smooth scalar on R^3 with exact partial derivatives of every order.
class AnalyticScalar {
 public:
  AnalyticScalar() = default;
  static AnalyticScalar polynomial(std::vector<Monomial> p);

  void add_term(AnalyticTerm t) { terms_.push_back(std::move(t)); }
  const std::vector<AnalyticTerm>& terms() const { return terms_; }

  AnalyticScalar& operator+=(const AnalyticScalar& o);
  AnalyticScalar scaled(double s) const;
  AnalyticScalar times_polynomial(const std::vector<Monomial>& p) const;

  double operator()(const Vec3& x) const;
  // d^n f with n the derivative counts per axis.
  double partial(const Vec3& x, const std::array<int, 3>& n) const;
  // D[k] holds the 3^k components of d^k f, slot-major, for k = 0..K.
  void jet(const Vec3& x, int K, std::vector<double>* D) const;
  // Sum of |coefficient| (|A| for trig terms); bounds |f| on the unit ball.
  double coefficient_l1() const;

 private:
  std::vector<AnalyticTerm> terms_;
};

// Portable deterministic draws on top of the standard 64-bit Mersenne Twister,
// whose output sequence is fixed by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  double uniform(double a = 0.0, double b = 1.0);
  int integer(int n);  // 0..n-1

 private:
  std::mt19937_64 g_;
};

// Seeded random scalar: monomials of degree <= 4 and, depending on the
// variant, trigonometric terms or a radial bump factor. |f| <= 1 on the unit ball.
AnalyticScalar random_scalar(Rng& rng, int variant);
// (|x|^2 - R^2)(1 + 0.3 P / |P|_1): vanishes on the sphere and has
// d_N q >= 1.4 R there.
AnalyticScalar dirichlet_scalar(Rng& rng, double R);
// Rank-1 field; odd variants add a rotational part (-y, x, 0) f.
std::array<AnalyticScalar, 3> random_vector(Rng& rng, int variant);

std::size_t pow3i(int k);
// Derivative counts per axis of a slot-major flat index of rank k.
std::array<int, 3> slot_counts(std::size_t flat, int k);

}  // namespace fluidlab

#endif
