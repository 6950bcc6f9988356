#include "fluidlab/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fluidlab {

SpacetimeChart SpacetimeChart::minkowski() { return SpacetimeChart(ChartKind::Minkowski, 0.0); }

SpacetimeChart SpacetimeChart::harmonic_trap(double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("trap strength k must be finite and >= 0");
  return SpacetimeChart(ChartKind::HarmonicTrap, k);
}

std::string SpacetimeChart::name() const {
  if (kind_ == ChartKind::Minkowski) return "minkowski";
  std::ostringstream os;
  os << "trap(k=" << k_ << ")";
  return os.str();
}

double SpacetimeChart::phi(const Vec4& e) const {
  if (kind_ == ChartKind::Minkowski) return 0.0;
  return 0.5 * k_ * (e[1] * e[1] + e[2] * e[2] + e[3] * e[3]);
}

double SpacetimeChart::lapse2(const Vec4& e) const { return 1.0 + 2.0 * phi(e); }

void SpacetimeChart::check_event(const Vec4& e) const {
  for (double v : e)
    if (!std::isfinite(v)) throw ChartDomainError("event has non-finite coordinates");
}

Mat4 SpacetimeChart::metric(const Vec4& e) const {
  check_event(e);
  Mat4 g = Mat4::Identity();
  g(0, 0) = -lapse2(e);
  return g;
}

Mat4 SpacetimeChart::inverse_metric(const Vec4& e) const {
  check_event(e);
  Mat4 g = Mat4::Identity();
  g(0, 0) = -1.0 / lapse2(e);
  return g;
}

namespace {

// First and second coordinate derivatives of the metric for the static charts.
// Only g_00 = -(1 + k r^2) varies.
double dmetric(const SpacetimeChart& c, const Vec4& e, int m, int a, int b) {
  if (c.kind() == ChartKind::Minkowski || m == 0 || a != 0 || b != 0) return 0.0;
  return -2.0 * c.k() * e[m];
}

double ddmetric(const SpacetimeChart& c, int m, int l, int a, int b) {
  if (c.kind() == ChartKind::Minkowski || m == 0 || l == 0 || a != 0 || b != 0) return 0.0;
  return m == l ? -2.0 * c.k() : 0.0;
}

double dinverse(const SpacetimeChart& c, const Vec4& e, int m, int a, int b) {
  if (c.kind() == ChartKind::Minkowski || m == 0 || a != 0 || b != 0) return 0.0;
  const double A = c.lapse2(e);
  return 2.0 * c.k() * e[m] / (A * A);
}

}  // namespace

Christoffel SpacetimeChart::christoffel(const Vec4& e) const {
  check_event(e);
  Christoffel out{};
  const Mat4 gi = inverse_metric(e);
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a)
      for (int n = 0; n < 4; ++n) {
        double s = 0.0;
        for (int l = 0; l < 4; ++l) {
          if (gi(b, l) == 0.0) continue;
          s += gi(b, l) * (dmetric(*this, e, a, l, n) + dmetric(*this, e, n, l, a) - dmetric(*this, e, l, a, n));
        }
        out.G[b][a][n] = 0.5 * s;
      }
  return out;
}

ChristoffelDerivative SpacetimeChart::christoffel_derivative(const Vec4& e) const {
  check_event(e);
  ChristoffelDerivative out{};
  const Mat4 gi = inverse_metric(e);
  for (int m = 0; m < 4; ++m)
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a)
        for (int n = 0; n < 4; ++n) {
          double s = 0.0;
          for (int l = 0; l < 4; ++l) {
            const double first = dmetric(*this, e, a, l, n) + dmetric(*this, e, n, l, a) - dmetric(*this, e, l, a, n);
            const double second = ddmetric(*this, m, a, l, n) + ddmetric(*this, m, n, l, a) - ddmetric(*this, m, l, a, n);
            s += dinverse(*this, e, m, b, l) * first + gi(b, l) * second;
          }
          out.dG[m][b][a][n] = 0.5 * s;
        }
  return out;
}

Riemann SpacetimeChart::riemann(const Vec4& e) const {
  const Christoffel c = christoffel(e);
  const ChristoffelDerivative d = christoffel_derivative(e);
  Riemann out{};
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s) {
          double v = d.dG[n][s][m][r] - d.dG[m][s][n][r];
          for (int a = 0; a < 4; ++a) v += c.G[a][m][r] * c.G[s][a][n] - c.G[a][n][r] * c.G[s][a][m];
          out.R[m][n][r][s] = v;
        }
  return out;
}

Mat4 SpacetimeChart::ricci(const Vec4& e) const {
  const Riemann rm = riemann(e);
  Mat4 ric = Mat4::Zero();
  for (int n = 0; n < 4; ++n)
    for (int a = 0; a < 4; ++a)
      for (int m = 0; m < 4; ++m) ric(n, a) += rm.R[n][m][a][m];
  return ric;
}

bool lorentzian_signature(const Mat4& g) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(g);
  int neg = 0, pos = 0;
  for (int i = 0; i < 4; ++i) {
    if (es.eigenvalues()(i) < 0.0) ++neg;
    else if (es.eigenvalues()(i) > 0.0) ++pos;
  }
  return neg == 1 && pos == 3;
}

FoliationFrame frame_at(const SpacetimeChart& chart, const Vec4& e) {
  FoliationFrame f;
  f.g_lower = chart.metric(e);
  if (!lorentzian_signature(f.g_lower)) throw ChartDomainError("metric is not Lorentzian at this event");
  f.g_upper = chart.inverse_metric(e);
  // tau_mu = -d_mu t / sqrt(-g(dt, dt)); the sign makes tau^0 > 0.
  const double gtt = f.g_upper(0, 0);
  if (!(gtt < 0.0)) throw ChartDomainError("time function is not timelike at this event");
  const double norm = std::sqrt(-gtt);
  f.tau_lower = {-1.0 / norm, 0.0, 0.0, 0.0};
  for (int m = 0; m < 4; ++m) {
    double s = 0.0;
    for (int n = 0; n < 4; ++n) s += f.g_upper(m, n) * f.tau_lower[n];
    f.tau_upper[m] = s;
  }
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      f.gbar_lower(m, n) = f.g_lower(m, n) + f.tau_lower[m] * f.tau_lower[n];
      f.gbar_upper(m, n) = f.g_upper(m, n) + f.tau_upper[m] * f.tau_upper[n];
      f.spatial_proj(m, n) = (m == n ? 1.0 : 0.0) + f.tau_upper[m] * f.tau_lower[n];
    }
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      f.riem_lower(m, n) = f.gbar_lower(m, n) + f.tau_lower[m] * f.tau_lower[n];
      f.riem_upper(m, n) = f.gbar_upper(m, n) + f.tau_upper[m] * f.tau_upper[n];
    }
  return f;
}

Tensor covariant_derivative_at(const SpacetimeChart& chart, const TensorFn& f, const Vec4& e, double h, int order) {
  const Tensor t0 = f(e);
  const int r = t0.rank();
  std::vector<bool> slots;
  slots.reserve(r + 1);
  slots.push_back(false);
  slots.insert(slots.end(), t0.upper.begin(), t0.upper.end());
  Tensor out(slots);
  const std::size_t n = t0.size();
  for (int m = 0; m < 4; ++m) {
    Vec4 ep = e, em = e;
    ep[m] += h;
    em[m] -= h;
    const Tensor tp = f(ep);
    const Tensor tm = f(em);
    if (order == 4) {
      Vec4 ep2 = e, em2 = e;
      ep2[m] += 2 * h;
      em2[m] -= 2 * h;
      const Tensor tp2 = f(ep2);
      const Tensor tm2 = f(em2);
      for (std::size_t i = 0; i < n; ++i)
        out.c[m * n + i] = (-tp2.c[i] + 8 * tp.c[i] - 8 * tm.c[i] + tm2.c[i]) / (12.0 * h);
    } else {
      for (std::size_t i = 0; i < n; ++i) out.c[m * n + i] = (tp.c[i] - tm.c[i]) / (2.0 * h);
    }
  }
  const Christoffel G = chart.christoffel(e);
  std::vector<int> idx(static_cast<std::size_t>(std::max(r, 1)));
  for (int m = 0; m < 4; ++m)
    for (std::size_t i = 0; i < n; ++i) {
      unflatten(i, r, idx.data());
      double corr = 0.0;
      for (int s = 0; s < r; ++s) {
        const std::size_t stride = pow4(r - s - 1);
        const int a = idx[s];
        const std::size_t base = i - static_cast<std::size_t>(a) * stride;
        for (int b = 0; b < 4; ++b) {
          const double tb = t0.c[base + static_cast<std::size_t>(b) * stride];
          if (t0.upper[s]) corr += G.G[a][m][b] * tb;
          else corr -= G.G[b][m][a] * tb;
        }
      }
      out.c[m * n + i] += corr;
    }
  return out;
}

TensorFn covariant_derivative(const SpacetimeChart& chart, TensorFn f, double h, int order) {
  return [chart, f = std::move(f), h, order](const Vec4& e) { return covariant_derivative_at(chart, f, e, h, order); };
}

Tensor riemann_tensor(const SpacetimeChart& chart, const Vec4& e) {
  const Riemann rm = chart.riemann(e);
  Tensor t({false, false, false, true});
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) t.at({m, n, a, b}) = rm.R[m][n][a][b];
  return t;
}

Tensor tau_tensor(const SpacetimeChart& chart, const Vec4& e) { return Tensor::covector(frame_at(chart, e).tau_lower); }

CurvatureReport curvature_report(const SpacetimeChart& chart, const std::vector<Vec4>& samples, int N, double h) {
  if (N < 0) throw std::invalid_argument("curvature report order N must be >= 0");
  CurvatureReport rep;
  rep.rm_terms.assign(static_cast<std::size_t>(N) + 1, 0.0);
  rep.tau_terms.assign(static_cast<std::size_t>(N), 0.0);
  std::vector<TensorFn> rm_chain{[chart](const Vec4& e) { return riemann_tensor(chart, e); }};
  std::vector<TensorFn> tau_chain{[chart](const Vec4& e) { return tau_tensor(chart, e); }};
  for (int s = 1; s <= N; ++s) {
    rm_chain.push_back(covariant_derivative(chart, rm_chain.back(), h));
    tau_chain.push_back(covariant_derivative(chart, tau_chain.back(), h));
  }
  for (const Vec4& e : samples) {
    const FoliationFrame fr = frame_at(chart, e);
    double total = 0.0;
    for (int s = 0; s <= N; ++s) {
      const double v = tensor_norm(rm_chain[s](e), fr.riem_lower);
      rep.rm_terms[s] = std::max(rep.rm_terms[s], v);
      total += v;
    }
    for (int s = 1; s <= N; ++s) {
      const double v = tensor_norm(tau_chain[s](e), fr.riem_lower);
      rep.tau_terms[s - 1] = std::max(rep.tau_terms[s - 1], v);
      total += v;
    }
    rep.R = std::max(rep.R, total);
  }
  return rep;
}

}  // namespace fluidlab
