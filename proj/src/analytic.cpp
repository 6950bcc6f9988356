#include "fluidlab/analytic.hpp"

#include <cmath>

namespace fluidlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double falling(int e, int m) {
  double v = 1.0;
  for (int i = 0; i < m; ++i) v *= e - i;
  return v;
}

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

double poly_partial(const std::vector<Monomial>& p, const Vec3& x, const std::array<int, 3>& m) {
  double s = 0.0;
  for (const Monomial& t : p) {
    if (t.e[0] < m[0] || t.e[1] < m[1] || t.e[2] < m[2]) continue;
    double v = t.c;
    for (int i = 0; i < 3; ++i) v *= falling(t.e[i], m[i]) * std::pow(x[i], t.e[i] - m[i]);
    s += v;
  }
  return s;
}

double trig_partial(const TrigFactor& w, const Vec3& x, const std::array<int, 3>& m) {
  double v = w.A;
  for (int i = 0; i < 3; ++i) v *= std::pow(w.k[i], m[i]);
  const int order = m[0] + m[1] + m[2];
  return v * std::sin(w.k[0] * x[0] + w.k[1] * x[1] + w.k[2] * x[2] + w.phase + 0.5 * kPi * order);
}

}  // namespace

std::size_t pow3i(int k) {
  std::size_t v = 1;
  for (int i = 0; i < k; ++i) v *= 3;
  return v;
}

std::array<int, 3> slot_counts(std::size_t flat, int k) {
  std::array<int, 3> n{0, 0, 0};
  for (int s = 0; s < k; ++s) {
    ++n[flat % 3];
    flat /= 3;
  }
  return n;
}

AnalyticScalar AnalyticScalar::polynomial(std::vector<Monomial> p) {
  AnalyticScalar f;
  AnalyticTerm t;
  t.poly = std::move(p);
  f.add_term(std::move(t));
  return f;
}

AnalyticScalar& AnalyticScalar::operator+=(const AnalyticScalar& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

AnalyticScalar AnalyticScalar::scaled(double s) const {
  AnalyticScalar f = *this;
  for (AnalyticTerm& t : f.terms_)
    for (Monomial& m : t.poly) m.c *= s;
  return f;
}

AnalyticScalar AnalyticScalar::times_polynomial(const std::vector<Monomial>& p) const {
  AnalyticScalar f;
  for (const AnalyticTerm& t : terms_) {
    AnalyticTerm u = t;
    u.poly.clear();
    for (const Monomial& a : t.poly)
      for (const Monomial& b : p)
        u.poly.push_back({a.c * b.c, {a.e[0] + b.e[0], a.e[1] + b.e[1], a.e[2] + b.e[2]}});
    f.add_term(std::move(u));
  }
  return f;
}

double AnalyticScalar::operator()(const Vec3& x) const { return partial(x, {0, 0, 0}); }

double AnalyticScalar::partial(const Vec3& x, const std::array<int, 3>& n) const {
  double s = 0.0;
  for (const AnalyticTerm& t : terms_) {
    if (!t.trig) {
      s += poly_partial(t.poly, x, n);
      continue;
    }
    // Leibniz rule per axis.
    for (int a = 0; a <= n[0]; ++a)
      for (int b = 0; b <= n[1]; ++b)
        for (int c = 0; c <= n[2]; ++c) {
          const double w = binom(n[0], a) * binom(n[1], b) * binom(n[2], c);
          const double pp = poly_partial(t.poly, x, {a, b, c});
          if (pp == 0.0) continue;
          s += w * pp * trig_partial(t.w, x, {n[0] - a, n[1] - b, n[2] - c});
        }
  }
  return s;
}

void AnalyticScalar::jet(const Vec3& x, int K, std::vector<double>* D) const {
  for (int k = 0; k <= K; ++k) {
    const std::size_t n = pow3i(k);
    D[k].assign(n, 0.0);
    // Components with equal counts coincide; compute each count vector once.
    double cache[5][5][5];
    bool have[5][5][5] = {};
    for (std::size_t f = 0; f < n; ++f) {
      const std::array<int, 3> c = slot_counts(f, k);
      if (!have[c[0]][c[1]][c[2]]) {
        cache[c[0]][c[1]][c[2]] = partial(x, c);
        have[c[0]][c[1]][c[2]] = true;
      }
      D[k][f] = cache[c[0]][c[1]][c[2]];
    }
  }
}

double AnalyticScalar::coefficient_l1() const {
  double s = 0.0;
  for (const AnalyticTerm& t : terms_) {
    double p = 0.0;
    for (const Monomial& m : t.poly) p += std::abs(m.c);
    s += p * (t.trig ? std::abs(t.w.A) : 1.0);
  }
  return s;
}

double Rng::uniform(double a, double b) {
  const double u = static_cast<double>(g_() >> 11) * 0x1.0p-53;
  return a + (b - a) * u;
}

int Rng::integer(int n) { return static_cast<int>(uniform(0.0, 1.0) * n) % n; }

namespace {

std::vector<Monomial> random_poly(Rng& rng, int terms, int degree) {
  std::vector<Monomial> p;
  p.push_back({rng.uniform(-1, 1), {0, 0, 0}});
  for (int i = 0; i < terms; ++i) {
    Monomial m;
    const int d = 1 + rng.integer(degree);
    for (int j = 0; j < d; ++j) ++m.e[rng.integer(3)];
    m.c = rng.uniform(-1, 1);
    p.push_back(m);
  }
  return p;
}

AnalyticTerm random_trig(Rng& rng) {
  AnalyticTerm t;
  t.poly = {{1.0, {0, 0, 0}}};
  t.trig = true;
  t.w.A = rng.uniform(-1, 1);
  for (double& k : t.w.k) k = rng.uniform(-2.5, 2.5);
  t.w.phase = rng.uniform(0, 2 * kPi);
  return t;
}

AnalyticScalar normalized(AnalyticScalar f) { return f.scaled(1.0 / f.coefficient_l1()); }

}  // namespace

AnalyticScalar random_scalar(Rng& rng, int variant) {
  AnalyticScalar f = AnalyticScalar::polynomial(random_poly(rng, 6, 4));
  switch (variant % 3) {
    case 0:
      break;
    case 1:
      f.add_term(random_trig(rng));
      f.add_term(random_trig(rng));
      break;
    default: {
      // (1 - r^2)^2 times a random linear function
      const std::vector<Monomial> bump = {{1, {0, 0, 0}},  {-2, {2, 0, 0}}, {-2, {0, 2, 0}}, {-2, {0, 0, 2}},
                                          {1, {4, 0, 0}},  {1, {0, 4, 0}},  {1, {0, 0, 4}},  {2, {2, 2, 0}},
                                          {2, {2, 0, 2}},  {2, {0, 2, 2}}};
      const std::vector<Monomial> lin = {{rng.uniform(0.5, 1), {0, 0, 0}},
                                         {rng.uniform(-0.5, 0.5), {1, 0, 0}},
                                         {rng.uniform(-0.5, 0.5), {0, 1, 0}},
                                         {rng.uniform(-0.5, 0.5), {0, 0, 1}}};
      AnalyticScalar b = AnalyticScalar::polynomial(bump).times_polynomial(lin);
      f = f.scaled(0.3);
      f += b;
      break;
    }
  }
  return normalized(f);
}

AnalyticScalar dirichlet_scalar(Rng& rng, double R) {
  AnalyticScalar P = random_scalar(rng, 1);
  AnalyticScalar q = P.scaled(0.3 / P.coefficient_l1());
  q += AnalyticScalar::polynomial({{1.0, {0, 0, 0}}});
  // |P| <= 1 needs R <= 1.
  const std::vector<Monomial> r2 = {{1.0, {2, 0, 0}}, {1.0, {0, 2, 0}}, {1.0, {0, 0, 2}}, {-R * R, {0, 0, 0}}};
  return q.times_polynomial(r2);
}

std::array<AnalyticScalar, 3> random_vector(Rng& rng, int variant) {
  std::array<AnalyticScalar, 3> a;
  for (int i = 0; i < 3; ++i) a[i] = random_scalar(rng, variant + i);
  if (variant % 2 == 1) {
    const AnalyticScalar f = random_scalar(rng, 0);
    a[0] += f.times_polynomial({{-1.0, {0, 1, 0}}});
    a[1] += f.times_polynomial({{1.0, {1, 0, 0}}});
  }
  return a;
}

}  // namespace fluidlab
