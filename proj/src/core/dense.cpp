#include "ssnmg/dense.hpp"

#include <algorithm>
#include <cmath>

#include "ssnmg/error.hpp"

namespace ssnmg {

DenseMatrix DenseMatrix::identity(int m) {
  DenseMatrix x(m);
  for (int i = 0; i < m; ++i) x(i, i) = 1.0;
  return x;
}

DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y) {
  require(x.m == y.m, "dense: dimension mismatch");
  const int m = x.m;
  DenseMatrix z(m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      const double xik = x(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < m; ++j) z(i, j) += xik * y(k, j);
    }
  return z;
}

DenseMatrix operator+(const DenseMatrix& x, const DenseMatrix& y) {
  require(x.m == y.m, "dense: dimension mismatch");
  DenseMatrix z = x;
  for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
  return z;
}

DenseMatrix operator-(const DenseMatrix& x, const DenseMatrix& y) {
  require(x.m == y.m, "dense: dimension mismatch");
  DenseMatrix z = x;
  for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] -= y.a[i];
  return z;
}

DenseMatrix operator*(double s, DenseMatrix x) {
  for (auto& v : x.a) v *= s;
  return x;
}

DenseMatrix transpose(const DenseMatrix& x) {
  DenseMatrix t(x.m);
  for (int i = 0; i < x.m; ++i)
    for (int j = 0; j < x.m; ++j) t(j, i) = x(i, j);
  return t;
}

std::vector<double> operator*(const DenseMatrix& x, const std::vector<double>& v) {
  require(static_cast<int>(v.size()) == x.m, "dense: dimension mismatch");
  std::vector<double> out(v.size(), 0.0);
  for (int i = 0; i < x.m; ++i) {
    double s = 0.0;
    for (int j = 0; j < x.m; ++j) s += x(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double frobenius_norm(const DenseMatrix& x) {
  double s = 0.0;
  for (double v : x.a) s += v * v;
  return std::sqrt(s);
}

double max_abs(const DenseMatrix& x) {
  double s = 0.0;
  for (double v : x.a) s = std::max(s, std::abs(v));
  return s;
}

double asymmetry(const DenseMatrix& x) {
  const double nx = frobenius_norm(x);
  return nx == 0.0 ? 0.0 : frobenius_norm(x - transpose(x)) / nx;
}

DenseMatrix symmetrized(const DenseMatrix& x) { return 0.5 * (x + transpose(x)); }

DenseMatrix cholesky(const DenseMatrix& x) {
  const int m = x.m;
  DenseMatrix l(m);
  for (int j = 0; j < m; ++j) {
    double d = x(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) fail(ErrorCode::not_spd, "cholesky: matrix is not positive definite");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < m; ++i) {
      double s = x(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

std::vector<double> cholesky_solve(const DenseMatrix& l, std::vector<double> b) {
  const int m = l.m;
  require(static_cast<int>(b.size()) == m, "cholesky_solve: dimension mismatch");
  for (int i = 0; i < m; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l(i, k) * b[k];
    b[i] = s / l(i, i);
  }
  for (int i = m - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < m; ++k) s -= l(k, i) * b[k];
    b[i] = s / l(i, i);
  }
  return b;
}

DenseMatrix spd_inverse(const DenseMatrix& x) {
  const DenseMatrix l = cholesky(x);
  DenseMatrix inv(x.m);
  std::vector<double> e(x.m);
  for (int j = 0; j < x.m; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    const auto col = cholesky_solve(l, e);
    for (int i = 0; i < x.m; ++i) inv(i, j) = col[i];
  }
  return symmetrized(inv);
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& x) {
  DenseMatrix a = x;
  const int m = a.m;
  const double scale = frobenius_norm(a);
  auto off = [&] {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  for (int sweep = 0; sweep < 100 && scale > 0.0 && off() > 1e-14 * scale; ++sweep) {
    for (int p = 0; p < m - 1; ++p)
      for (int q = p + 1; q < m; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < m; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < m; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(m);
  for (int i = 0; i < m; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace ssnmg
