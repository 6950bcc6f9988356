#include "fluidlab/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace fluidlab {

Lattice3 Lattice3::covering(double R, double h, int margin) {
  if (!(h > 0.0 && R > 0.0)) throw std::invalid_argument("lattice needs R > 0 and h > 0");
  Lattice3 l;
  l.h = h;
  l.m = static_cast<int>(std::ceil(R / h - 1e-9)) + margin;
  l.n = 2 * l.m + 1;
  return l;
}

std::size_t pow3(int r) {
  std::size_t p = 1;
  for (int i = 0; i < r; ++i) p *= 3;
  return p;
}

LatticeField sample(const Lattice3& lat, int rank, const ComponentFn& f) {
  LatticeField out{&lat, rank, {}};
  const std::size_t nc = out.ncomp();
  out.v.assign(lat.size() * nc, 0.0);
  for (int i = 0; i < lat.n; ++i)
    for (int j = 0; j < lat.n; ++j)
      for (int k = 0; k < lat.n; ++k) f(lat.coord(i, j, k), out.v.data() + lat.index(i, j, k) * nc);
  return out;
}

LatticeField sample_scalar(const Lattice3& lat, const std::function<double(const Vec3&)>& f) {
  return sample(lat, 0, [&](const Vec3& x, double* o) { o[0] = f(x); });
}

LatticeField grad(const LatticeField& f) {
  const Lattice3& lat = *f.lat;
  const std::size_t nc = f.ncomp();
  LatticeField out{f.lat, f.rank + 1, {}};
  out.v.assign(lat.size() * nc * 3, 0.0);
  const double inv2h = 1.0 / (2.0 * lat.h);
  const std::size_t stride[3] = {static_cast<std::size_t>(lat.n) * lat.n, static_cast<std::size_t>(lat.n), 1};
  for (int i = 0; i < lat.n; ++i)
    for (int j = 0; j < lat.n; ++j)
      for (int k = 0; k < lat.n; ++k) {
        const std::size_t node = lat.index(i, j, k);
        const int pos[3] = {i, j, k};
        double* o = out.v.data() + node * nc * 3;
        for (int d = 0; d < 3; ++d) {
          const std::size_t s = stride[d];
          const double* c = f.v.data() + node * nc;
          if (pos[d] == 0) {
            const double* p1 = c + s * nc;
            const double* p2 = c + 2 * s * nc;
            for (std::size_t a = 0; a < nc; ++a) o[d * nc + a] = (-3 * c[a] + 4 * p1[a] - p2[a]) * inv2h;
          } else if (pos[d] == lat.n - 1) {
            const double* m1 = c - s * nc;
            const double* m2 = c - 2 * s * nc;
            for (std::size_t a = 0; a < nc; ++a) o[d * nc + a] = (3 * c[a] - 4 * m1[a] + m2[a]) * inv2h;
          } else {
            const double* p1 = c + s * nc;
            const double* m1 = c - s * nc;
            for (std::size_t a = 0; a < nc; ++a) o[d * nc + a] = (p1[a] - m1[a]) * inv2h;
          }
        }
      }
  return out;
}

LatticeField trace(const LatticeField& f, int a, int b) {
  if (a >= b || b >= f.rank) throw std::invalid_argument("trace slots out of range");
  LatticeField out{f.lat, f.rank - 2, {}};
  const std::size_t nin = f.ncomp(), nout = out.ncomp();
  out.v.assign(f.lat->size() * nout, 0.0);
  std::vector<int> idx(static_cast<std::size_t>(f.rank));
  for (std::size_t c = 0; c < nin; ++c) {
    std::size_t rem = c;
    for (int s = f.rank - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(rem % 3);
      rem /= 3;
    }
    if (idx[a] != idx[b]) continue;
    std::size_t oc = 0;
    for (int s = 0; s < f.rank; ++s)
      if (s != a && s != b) oc = oc * 3 + idx[s];
    for (std::size_t node = 0; node < f.lat->size(); ++node) out.v[node * nout + oc] += f.v[node * nin + c];
  }
  return out;
}

LatticeField add(const LatticeField& a, const LatticeField& b, double cb) {
  if (a.rank != b.rank || a.lat != b.lat) throw std::invalid_argument("field shapes differ");
  LatticeField out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += cb * b.v[i];
  return out;
}

Interpolator::Interpolator(const Lattice3& lat, const std::vector<Vec3>& points) {
  idx_.resize(points.size());
  w_.resize(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    int base[3];
    double wax[3][4];
    for (int d = 0; d < 3; ++d) {
      const double s = points[p][d] / lat.h + lat.m;
      int b = static_cast<int>(std::floor(s)) - 1;
      if (b < 0 || b + 3 > lat.n - 1) throw std::out_of_range("interpolation point outside the lattice");
      base[d] = b;
      const double t = s - b;  // nodes at 0, 1, 2, 3
      for (int q = 0; q < 4; ++q) {
        double w = 1.0;
        for (int r = 0; r < 4; ++r)
          if (r != q) w *= (t - r) / (q - r);
        wax[d][q] = w;
      }
    }
    int c = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int e = 0; e < 4; ++e) {
          idx_[p][c] = lat.index(base[0] + a, base[1] + b, base[2] + e);
          w_[p][c] = wax[0][a] * wax[1][b] * wax[2][e];
          ++c;
        }
  }
}

void Interpolator::eval(const LatticeField& f, std::size_t p, double* out) const {
  const std::size_t nc = f.ncomp();
  for (std::size_t a = 0; a < nc; ++a) out[a] = 0.0;
  for (int c = 0; c < 64; ++c) {
    const double* src = f.v.data() + idx_[p][c] * nc;
    const double w = w_[p][c];
    for (std::size_t a = 0; a < nc; ++a) out[a] += w * src[a];
  }
}

std::vector<double> Interpolator::eval(const LatticeField& f, std::size_t p) const {
  std::vector<double> out(f.ncomp());
  eval(f, p, out.data());
  return out;
}

}  // namespace fluidlab
