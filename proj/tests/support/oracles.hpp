#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ssnmg/backend.hpp"
#include "ssnmg/dense.hpp"
#include "ssnmg/grid.hpp"

namespace oracle {

// -Laplace(y) = 1 on the unit square, y = 0 on the boundary: x(1-x)/2 minus
// the harmonic correction, a single sine series in x.
inline double poisson_unit_load(double x, double y, int terms = 401) {
  const double pi = std::numbers::pi;
  double s = 0.0;
  for (int m = 1; m <= terms; m += 2) {
    const double a = m * pi * std::abs(y - 0.5), b = m * pi * 0.5;
    // cosh(a) / cosh(b) without overflow, a <= b
    const double ratio = std::exp(a - b) * (1.0 + std::exp(-2.0 * a)) / (1.0 + std::exp(-2.0 * b));
    s += 4.0 / (m * m * m * pi * pi * pi) * std::sin(m * pi * x) * ratio;
  }
  return 0.5 * x * (1.0 - x) - s;
}

// Same solution at the centre from the double sine series.
inline double poisson_center_double_series(int terms = 2001) {
  const double pi = std::numbers::pi;
  double s = 0.0;
  for (int m = 1; m <= terms; m += 2)
    for (int n = 1; n <= terms; n += 2) {
      const double sm = ((m / 2) % 2 == 0) ? 1.0 : -1.0;
      const double sn = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
      s += 16.0 * sm * sn / (std::pow(pi, 4) * m * n * double(m * m + n * n));
    }
  return s;
}

inline ssnmg::CellField random_field(int n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  ssnmg::CellField u(n);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = d(rng);
  return u;
}

inline ssnmg::InactiveMask random_mask(int n, std::mt19937_64& rng, double p = 0.5) {
  std::bernoulli_distribution d(p);
  ssnmg::InactiveMask m(n);
  for (std::size_t i = 0; i < m.size(); ++i) m.set(i, d(rng));
  if (m.empty()) m.set(std::size_t{0}, true);
  return m;
}

inline ssnmg::DenseMatrix random_spd(std::mt19937_64& rng, int m, double shift = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  ssnmg::DenseMatrix x(m);
  for (auto& v : x.a) v = g(rng);
  ssnmg::DenseMatrix a = x * transpose(x);
  for (int i = 0; i < m; ++i) a(i, i) += shift;
  return symmetrized(a);
}

// Full Hessian K*K + beta I as a dense N x N matrix (all cells).
inline ssnmg::DenseMatrix dense_hessian(const ssnmg::OperatorBackend& be, double beta, int n) {
  const int N = n * n;
  ssnmg::DenseMatrix h(N);
  for (int c = 0; c < N; ++c) {
    ssnmg::CellField e(n);
    e[c] = 1.0;
    ssnmg::CellField col = be.apply_KtK(e);
    for (int r = 0; r < N; ++r) h(r, c) = col[r];
    h(c, c) += beta;
  }
  return h;
}

// Projected gradient (FISTA) for min 1/2 u'Hu - f'u over a <= u <= b with a
// dense H, run until the gradient-mapping norm drops below tol.
inline std::vector<double> projected_gradient(const ssnmg::DenseMatrix& h, const std::vector<double>& f,
                                              const std::vector<double>& a, const std::vector<double>& b,
                                              double tol = 1e-10, int max_iter = 2000000) {
  const int m = h.m;
  const auto ev = ssnmg::symmetric_eigenvalues(h);
  const double L = ev.back(), mu = ev.front();
  const double step = 1.0 / L;
  const double q = (std::sqrt(L) - std::sqrt(mu)) / (std::sqrt(L) + std::sqrt(mu));
  std::vector<double> x(m, 0.0), y(m), xn(m);
  for (int i = 0; i < m; ++i) x[i] = std::clamp(0.0, a[i], b[i]);
  y = x;
  for (int it = 0; it < max_iter; ++it) {
    const auto hy = h * y;
    for (int i = 0; i < m; ++i) xn[i] = std::clamp(y[i] - step * (hy[i] - f[i]), a[i], b[i]);
    // gradient mapping at x_n
    const auto hx = h * xn;
    double gm = 0.0;
    for (int i = 0; i < m; ++i) {
      const double p = std::clamp(xn[i] - step * (hx[i] - f[i]), a[i], b[i]);
      gm += (xn[i] - p) * (xn[i] - p);
    }
    for (int i = 0; i < m; ++i) y[i] = xn[i] + q * (xn[i] - x[i]);
    x = xn;
    if (std::sqrt(gm) / step <= tol) break;
  }
  return x;
}

}  // namespace oracle
