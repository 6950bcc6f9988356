// Remainder and time-derivative bounds on analytic test fields in the
// harmonic trap: a boosted unit velocity u, an enthalpy sigma, V = sqrt(sigma) u.

#include "fluidlab/analytic.hpp"
#include "fluidlab/eos.hpp"
#include "fluidlab/fields.hpp"
#include "fluidlab/spacetime.hpp"
#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace fluidlab::detail {

namespace {

// Nested differences are second order with this step; three levels keep
// rounding near 1e-7 relative.
constexpr double kStep = 2e-3;

const std::vector<std::string> kNames = {"dtvf", "dtfn", "commest", "crest", "fest", "gest", "eest"};

Tensor contract_first(const Tensor& d, const Vec4& v) {
  std::vector<bool> slots(d.upper.begin() + 1, d.upper.end());
  Tensor out(slots);
  const std::size_t n = out.size();
  for (int a = 0; a < 4; ++a)
    for (std::size_t i = 0; i < n; ++i) out.c[i] += v[a] * d.c[a * n + i];
  return out;
}

Tensor scale(Tensor t, double s) {
  for (double& c : t.c) c *= s;
  return t;
}

Tensor sub(Tensor a, const Tensor& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a.c[i] -= b.c[i];
  return a;
}

struct Fields {
  SpacetimeChart chart = SpacetimeChart::minkowski();
  AffineEos eos{0.5, 1.0, 1.0};
  double lambda = 0.1;
  AnalyticScalar s, psi;
  std::array<AnalyticScalar, 3> v;
  std::array<AnalyticScalar, 4> X;
  Vec3 w{0, 0, 0};
  double vmax = 1.0;

  Vec3 advect(const Vec4& e) const { return {e[1] - e[0] * w[0], e[2] - e[0] * w[1], e[3] - e[0] * w[2]}; }

  double sigma(const Vec4& e) const { return eos.sigma0() * (1.0 + 0.2 * s(advect(e))); }
  Vec4 u(const Vec4& e) const {
    const Vec3 y = advect(e);
    const double a = std::sqrt(chart.lapse2(e));
    Vec3 vv;
    double v2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      vv[i] = v[i](y) / vmax;
      v2 += vv[i] * vv[i];
    }
    const double g = 1.0 / std::sqrt(1.0 - lambda * lambda * v2);
    return {g / a, g * lambda * vv[0], g * lambda * vv[1], g * lambda * vv[2]};
  }
  Vec4 V(const Vec4& e) const {
    const Vec4 uu = u(e);
    const double r = std::sqrt(sigma(e));
    return {r * uu[0], r * uu[1], r * uu[2], r * uu[3]};
  }
};

class Calculus {
 public:
  explicit Calculus(std::shared_ptr<const Fields> f) : f_(std::move(f)) {}

  TensorFn cd(TensorFn g) const { return covariant_derivative(f_->chart, std::move(g), kStep, 2); }
  TensorFn sd(TensorFn g) const {
    auto chart = f_->chart;
    return [chart, g = std::move(g)](const Vec4& e) {
      return project_spatial(frame_at(chart, e), covariant_derivative_at(chart, g, e, kStep, 2));
    };
  }
  TensorFn md(TensorFn g) const {
    auto f = f_;
    return [f, g = std::move(g)](const Vec4& e) {
      return contract_first(covariant_derivative_at(f->chart, g, e, kStep, 2), f->u(e));
    };
  }
  // nabla_tau through u = u_bar - u_tau tau.
  TensorFn td(TensorFn g) const {
    auto f = f_;
    return [f, g = std::move(g)](const Vec4& e) {
      const Vec4 uu = f->u(e);
      const VelocitySplit sp = split_velocity(f->chart, uu, e);
      const Tensor d = covariant_derivative_at(f->chart, g, e, kStep, 2);
      Tensor a = contract_first(d, uu);
      const Tensor b = contract_first(d, sp.u_bar);
      for (std::size_t i = 0; i < a.size(); ++i) a.c[i] = (a.c[i] - b.c[i]) / (-sp.u_tau);
      return a;
    };
  }
  // nabla-bar^k nabla_u^l g
  TensorFn mixed(TensorFn g, int k, int l) const {
    for (int i = 0; i < l; ++i) g = md(g);
    for (int i = 0; i < k; ++i) g = sd(g);
    return g;
  }
  TensorFn lap(TensorFn g) const {
    auto chart = f_->chart;
    TensorFn h = sd(sd(std::move(g)));
    return [chart, h](const Vec4& e) {
      const Tensor t = h(e);
      const Mat4 gi = frame_at(chart, e).gbar_upper;
      double s = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) s += gi(a, b) * t.c[4 * a + b];
      return Tensor::scalar(s);
    };
  }
  double norm(const Tensor& t, const Vec4& e) const { return riem_norm(f_->chart, t, e); }

  TensorFn sigma() const {
    auto f = f_;
    return [f](const Vec4& e) { return Tensor::scalar(f->sigma(e)); };
  }
  TensorFn psi() const {
    auto f = f_;
    return [f](const Vec4& e) { return Tensor::scalar(f->psi(f->advect(e))); };
  }
  TensorFn u() const {
    auto f = f_;
    return [f](const Vec4& e) { return Tensor::vector(f->u(e)); };
  }
  TensorFn V() const {
    auto f = f_;
    return [f](const Vec4& e) { return Tensor::vector(f->V(e)); };
  }
  TensorFn X() const {
    auto f = f_;
    return [f](const Vec4& e) {
      const Vec3 y = f->advect(e);
      return Tensor::vector({f->X[0](y), f->X[1](y), f->X[2](y), f->X[3](y)});
    };
  }
  TensorFn of_sigma(double (AffineEos::*fn)(double) const) const {
    auto f = f_;
    return [f, fn](const Vec4& e) { return Tensor::scalar((f->eos.*fn)(f->sigma(e))); };
  }

  // Pointwise |g|_s = sum_{k + l <= s} |nabla-bar^k nabla_u^l g|.
  double bar(const TensorFn& g, int s, const Vec4& e) const {
    double acc = 0.0;
    for (int k = 0; k <= s; ++k)
      for (int l = 0; k + l <= s; ++l) acc += norm(mixed(g, k, l)(e), e);
    return acc;
  }

  const Fields& fields() const { return *f_; }

 private:
  std::shared_ptr<const Fields> f_;
};

std::shared_ptr<Fields> make_fields(const VerifyOptions& opt, int i, double lambda) {
  auto f = std::make_shared<Fields>();
  f->chart = SpacetimeChart::harmonic_trap(opt.trap_k);
  f->lambda = lambda;
  Rng rng(opt.seed * 1000003ULL + 4 * 7919ULL + static_cast<std::uint64_t>(i));
  f->s = random_scalar(rng, i);
  f->psi = random_scalar(rng, i + 1);
  f->v = random_vector(rng, i);
  for (int a = 0; a < 4; ++a) f->X[a] = random_scalar(rng, i + a);
  for (double& c : f->w) c = rng.uniform(-0.3, 0.3);
  // |v| <= 1 on the ball: each component is bounded by its coefficient sum.
  double m = 0.0;
  for (const auto& c : f->v) m += c.coefficient_l1() * c.coefficient_l1();
  f->vmax = std::sqrt(m);
  return f;
}

struct Sampler {
  std::vector<Vec4> x;
  std::vector<double> w;

  double l2(const std::function<double(const Vec4&)>& g) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double v = g(x[i]);
      s += w[i] * v * v;
    }
    return std::sqrt(s);
  }
};

Sampler sampler(const VerifyOptions& opt) {
  const SampleSet s = ball_gauss(opt.R, 3 * opt.resolution, 3 * opt.resolution, 6 * opt.resolution);
  return {s.points, s.weights};
}

double curvature_constant(const VerifyOptions& opt) {
  const SpacetimeChart chart = SpacetimeChart::harmonic_trap(opt.trap_k);
  std::vector<Vec4> pts;
  for (double r : {0.0, 0.5 * opt.R, opt.R}) pts.push_back({0.0, r, 0.0, 0.0});
  return curvature_report(chart, pts, 1).R;
}

// |nabla^r X| against |X|_r + |u|_{r-1} |X|_1 + P(|u|_{r-2}, R) |X|_{r-1},
// P = (1 + |u|_{r-2} + R)^2; worst point.
std::pair<double, double> dtvf_instance(const Calculus& C, int r, double Rc, const std::vector<Vec4>& pts) {
  const TensorFn X = C.X(), u = C.u();
  TensorFn Dr = X;
  for (int i = 0; i < r; ++i) Dr = C.cd(Dr);
  double best = -1.0, L = 0.0, Rr = 0.0;
  for (const Vec4& e : pts) {
    const double lhs = C.norm(Dr(e), e);
    const double ur1 = C.bar(u, r - 1, e);
    const double ur2 = r >= 2 ? C.bar(u, r - 2, e) : 0.0;
    const double P = std::pow(1.0 + ur2 + Rc, 2);
    const double rhs = C.bar(X, r, e) + ur1 * C.bar(X, 1, e) + P * C.bar(X, r - 1, e);
    if (lhs / rhs > best) {
      best = lhs / rhs;
      L = lhs;
      Rr = rhs;
    }
  }
  return {L, Rr};
}

InequalityReport make(const std::string& suite, const std::string& variant) {
  InequalityReport r;
  r.suite = suite;
  r.name = variant.empty() ? suite : suite + "[" + variant + "]";
  return r;
}

void push(InequalityReport& r, int i, double lhs, double rhs) {
  InequalityInstance in;
  in.index = i;
  in.lhs = lhs;
  in.rhs = rhs;
  r.instances.push_back(in);
}

}  // namespace

bool is_remainder_suite(const std::string& name) {
  return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

double dtvf_constant(const VerifyOptions& opt, int r, double lambda) {
  const Sampler S = sampler(opt);
  const double Rc = curvature_constant(opt);
  double c = 0.0;
  for (int i = 0; i < opt.instances; ++i) {
    const Calculus C(make_fields(opt, i, lambda));
    const auto [l, rr] = dtvf_instance(C, r, Rc, S.x);
    c = std::max(c, l / rr);
  }
  return c;
}

std::vector<InequalityReport> run_remainder_suite(const std::string& name, const VerifyOptions& opt) {
  if (!(opt.lambda > 0.0 && opt.lambda < 1.0)) throw ConfigError("boost lambda must lie in (0, 1)");
  const Sampler S = sampler(opt);
  const double Rc = curvature_constant(opt);
  std::vector<InequalityReport> out;

  if (name == "dtvf") {
    for (int r : {1, 2}) {
      InequalityReport rep = make(name, "r=" + std::to_string(r));
      for (int i = 0; i < opt.instances; ++i) {
        const Calculus C(make_fields(opt, i, opt.lambda));
        const auto [l, rr] = dtvf_instance(C, r, Rc, S.x);
        push(rep, i, l, rr);
      }
      out.push_back(std::move(rep));
    }
    return out;
  }

  if (name == "dtfn") {
    // r = 2, k = l = 0: |nabla_tau^2 psi| against |nabla_u^2 psi| + lambda^2 |D^2 psi| + |u|_1 |psi|_1.
    InequalityReport rep = make(name, "r=2");
    for (int i = 0; i < opt.instances; ++i) {
      const Calculus C(make_fields(opt, i, opt.lambda));
      const TensorFn psi = C.psi(), u = C.u();
      const TensorFn tt = C.td(C.td(psi)), uu = C.md(C.md(psi)), ss = C.sd(C.sd(psi));
      double best = -1.0, L = 0.0, Rr = 0.0;
      for (const Vec4& e : S.x) {
        const double lam = split_velocity(C.fields().chart, C.fields().u(e), e).lambda;
        const double lhs = C.norm(tt(e), e);
        const double rhs = C.norm(uu(e), e) + lam * lam * C.norm(ss(e), e) + C.bar(u, 1, e) * C.bar(psi, 1, e);
        if (lhs / rhs > best) {
          best = lhs / rhs;
          L = lhs;
          Rr = rhs;
        }
      }
      push(rep, i, L, Rr);
    }
    out.push_back(std::move(rep));
    return out;
  }

  if (name == "commest") {
    // k = l = 1 with the commutator sign [nabla_mu, nabla_u] f = (nabla_mu u^nu) nabla_nu f
    // moved to the left; the right side starts at s = 1.
    InequalityReport rep = make(name, "k=1,l=1");
    for (int i = 0; i < opt.instances; ++i) {
      const Calculus C(make_fields(opt, i, opt.lambda));
      const TensorFn f = C.psi(), u = C.u();
      const TensorFn a = C.sd(C.md(f)), b = C.md(C.sd(f)), Du = C.sd(u), df = C.cd(f);
      const double lhs = S.l2([&](const Vec4& e) {
        const Tensor du = Du(e), g = df(e);
        Tensor c = sub(a(e), b(e));
        for (int m = 0; m < 4; ++m)
          for (int n = 0; n < 4; ++n) c.c[m] -= du.c[4 * m + n] * g.c[n];
        return C.norm(c, e);
      });
      double un = 0.0;
      for (int k = 0; k <= 1; ++k)
        for (int l = 0; k + l <= 1; ++l) {
          const TensorFn g = C.mixed(u, k, l);
          un += S.l2([&](const Vec4& e) { return C.norm(g(e), e); });
        }
      const double P = std::pow(1.0 + opt.lambda + Rc + un, 2);
      push(rep, i, lhs, P * S.l2([&](const Vec4& e) { return C.norm(df(e), e); }));
    }
    out.push_back(std::move(rep));
    return out;
  }

  // Norm ||g||_s = sum_{k + l <= s} ||nabla-bar^k nabla_u^l g||.
  auto snorm = [&](const Calculus& C, const TensorFn& g, int s) {
    double acc = 0.0;
    for (int k = 0; k <= s; ++k)
      for (int l = 0; k + l <= s; ++l) {
        const TensorFn h = C.mixed(g, k, l);
        acc += S.l2([&](const Vec4& e) { return C.norm(h(e), e); });
      }
    return acc;
  };

  if (name == "crest") {
    const Fields probe;
    const double s0 = probe.eos.sigma0();
    const EosReport er = validate_assumptions(probe.eos, 0.8 * s0, 1.2 * s0);
    const double L = er.L1 + 1.0 / er.L2;
    for (auto kl : {std::pair{2, 0}, std::pair{1, 1}}) {
      InequalityReport rep = make(name, "k=" + std::to_string(kl.first) + ",l=" + std::to_string(kl.second));
      for (int i = 0; i < opt.instances; ++i) {
        const Calculus C(make_fields(opt, i, opt.lambda));
        // The top-order chain-rule term carries e''(sigma); only then is the
        // difference controlled by ||sigma||_{r-1}.
        const TensorFn ep = C.of_sigma(&AffineEos::de), epp = C.of_sigma(&AffineEos::d2e), sg = C.sigma();
        const TensorFn a = C.mixed(ep, kl.first, kl.second), b = C.mixed(sg, kl.first, kl.second);
        const double lhs = S.l2([&](const Vec4& e) { return C.norm(sub(a(e), scale(b(e), epp(e).c[0])), e); });
        push(rep, i, lhs, std::pow(1.0 + L + opt.lambda + Rc + snorm(C, sg, 1), 3));
      }
      out.push_back(std::move(rep));
    }
    return out;
  }

  const std::vector<std::pair<int, int>> low = {{0, 0}, {1, 0}, {0, 1}};

  if (name == "fest") {
    for (auto [k, l] : low) {
      InequalityReport rep = make(name, "k=" + std::to_string(k) + ",l=" + std::to_string(l));
      for (int i = 0; i < opt.instances; ++i) {
        const Calculus C(make_fields(opt, i, opt.lambda));
        const TensorFn V = C.V(), DV = C.cd(V);
        const TensorFn Phi = [DV](const Vec4& e) {
          const Tensor d = DV(e);  // [mu][nu] = nabla_mu V^nu
          double s = 0.0;
          for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) s += d.c[4 * m + n] * d.c[4 * n + m];
          return Tensor::scalar(-s);
        };
        const TensorFn F = C.mixed(Phi, k, l), top = C.cd(C.mixed(V, k, l));
        const double lhs = S.l2([&](const Vec4& e) { return C.norm(F(e), e); });
        const double P = std::pow(1.0 + snorm(C, V, k + l) + snorm(C, C.sigma(), k + l) + Rc, 2);
        push(rep, i, lhs, S.l2([&](const Vec4& e) { return C.norm(top(e), e); }) + P);
      }
      out.push_back(std::move(rep));
    }
    return out;
  }

  if (name == "gest") {
    for (auto kl : {std::pair{1, 0}, std::pair{0, 1}}) {
      const int k = kl.first, l = kl.second;
      InequalityReport rep = make(name, "k=" + std::to_string(k) + ",l=" + std::to_string(l));
      for (int i = 0; i < opt.instances; ++i) {
        const Calculus C(make_fields(opt, i, opt.lambda));
        const TensorFn sg = C.sigma(), u = C.u();
        TensorFn g1a = C.lap(C.mixed(sg, 0, l)), g1b = C.mixed(C.lap(sg), 0, l);
        for (int j = 0; j < k; ++j) {
          g1a = C.sd(g1a);
          g1b = C.sd(g1b);
        }
        const TensorFn g2a = C.mixed(C.td(C.td(sg)), k, l), g2b = C.td(C.td(C.mixed(sg, k, l)));
        const double lhs = S.l2([&](const Vec4& e) { return C.norm(sub(g1a(e), g1b(e)), e); }) +
                           S.l2([&](const Vec4& e) { return C.norm(sub(g2a(e), g2b(e)), e); });
        TensorFn Du = u;
        for (int j = 0; j < k + l + 1; ++j) Du = C.cd(Du);
        const double P = std::pow(1.0 + snorm(C, u, k + l), 2);
        push(rep, i, lhs, S.l2([&](const Vec4& e) { return C.norm(Du(e), e); }) + P * snorm(C, sg, k + l));
      }
      out.push_back(std::move(rep));
    }
    return out;
  }

  if (name == "eest") {
    for (auto [k, l] : low) {
      InequalityReport rep = make(name, "k=" + std::to_string(k) + ",l=" + std::to_string(l));
      for (int i = 0; i < opt.instances; ++i) {
        const Calculus C(make_fields(opt, i, opt.lambda));
        const TensorFn sg = C.sigma(), u = C.u();
        const double inv_eta2 = 1.0 / C.fields().eos.c2();
        const TensorFn uu = C.md(C.md(sg));
        const TensorFn scaled = [uu, inv_eta2](const Vec4& e) { return scale(uu(e), inv_eta2); };
        const TensorFn ea = C.mixed(sg, k, l + 2), eb = C.mixed(scaled, k, l);
        const TensorFn esig = C.of_sigma(&AffineEos::e), desig = C.of_sigma(&AffineEos::de);
        const TensorFn due = C.md(esig), dude = C.md(desig), dus = C.md(sg);
        const TensorFn Gin = [due, dude, dus](const Vec4& e) {
          return Tensor::scalar(-(due(e).c[0] + dude(e).c[0]) * dus(e).c[0]);
        };
        const TensorFn G = C.mixed(Gin, k, l);
        const double lhs = S.l2([&](const Vec4& e) { return C.norm(sub(scale(ea(e), inv_eta2), eb(e)), e); }) +
                           S.l2([&](const Vec4& e) { return C.norm(G(e), e); });
        const TensorFn top = C.mixed(sg, k, l);
        const int r1 = k + l - 1;
        const double P = std::pow(1.0 + (r1 >= 0 ? snorm(C, u, r1) + snorm(C, sg, r1) : 0.0), 2);
        push(rep, i, lhs, S.l2([&](const Vec4& e) { return C.norm(top(e), e); }) + P);
      }
      out.push_back(std::move(rep));
    }
    return out;
  }

  throw std::invalid_argument("unknown remainder suite " + name);
}

}  // namespace fluidlab::detail
