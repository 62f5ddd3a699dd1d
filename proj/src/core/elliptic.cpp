#include "ssnmg/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ssnmg/error.hpp"

namespace ssnmg {

NodalField::NodalField(int n, double value) : n_(n) {
  require(n >= 2, "nodal field needs n >= 2");
  values_.assign(static_cast<std::size_t>(n - 1) * (n - 1), value);
}

double NodalField::norm2() const {
  double s = 0.0;
  for (double x : values_) s += x * x;
  return std::sqrt(s);
}

double NodalField::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

namespace {

// Node arrays padded with the boundary: (n+1)^2 entries, node (i, j) at
// i + (n+1) j, boundary entries held at zero.
struct Padded {
  int n = 0;
  std::vector<double> v;

  explicit Padded(int n_) : n(n_), v(static_cast<std::size_t>(n_ + 1) * (n_ + 1), 0.0) {}
  std::size_t stride() const { return static_cast<std::size_t>(n + 1); }
  double& operator()(int i, int j) { return v[static_cast<std::size_t>(i) + stride() * j]; }
  double operator()(int i, int j) const { return v[static_cast<std::size_t>(i) + stride() * j]; }
};

Padded pad(const NodalField& y) {
  Padded p(y.n());
  for (int j = 1; j < y.n(); ++j)
    for (int i = 1; i < y.n(); ++i) p(i, j) = y.at(i, j);
  return p;
}

NodalField unpad(const Padded& p) {
  NodalField y(p.n);
  for (int j = 1; j < p.n; ++j)
    for (int i = 1; i < p.n; ++i) y.at(i, j) = p(i, j);
  return y;
}

inline double neighbour_sum(const Padded& x, int i, int j) {
  const std::size_t s = x.stride();
  const double* c = &x.v[static_cast<std::size_t>(i) + s * j];
  return c[-1] + c[1] + c[-static_cast<std::ptrdiff_t>(s)] + c[s] + c[-static_cast<std::ptrdiff_t>(s) - 1] +
         c[-static_cast<std::ptrdiff_t>(s) + 1] + c[s - 1] + c[s + 1];
}

// r = b - A x on the interior.
void residual(const Padded& x, const Padded& b, Padded& r) {
  for (int j = 1; j < x.n; ++j)
    for (int i = 1; i < x.n; ++i) r(i, j) = b(i, j) - (8.0 * x(i, j) - neighbour_sum(x, i, j)) / 3.0;
}

double interior_norm(const Padded& x) {
  double s = 0.0;
  for (int j = 1; j < x.n; ++j)
    for (int i = 1; i < x.n; ++i) s += x(i, j) * x(i, j);
  return std::sqrt(s);
}

void gauss_seidel_colour(Padded& x, const Padded& b, int colour) {
  for (int j = 1; j < x.n; ++j) {
    const int start = ((1 + j) % 2 == colour) ? 1 : 2;
    for (int i = start; i < x.n; i += 2) x(i, j) = (3.0 * b(i, j) + neighbour_sum(x, i, j)) / 8.0;
  }
}

// Banded Cholesky factor of the Q1 stiffness matrix on the interior nodes.
class BandedCholesky {
 public:
  explicit BandedCholesky(int n) : side_(n - 1), m_((n - 1) * (n - 1)), bw_(n) {
    l_.assign(static_cast<std::size_t>(m_) * (bw_ + 1), 0.0);
    for (int i = 0; i < m_; ++i) {
      const int lo = std::max(0, i - bw_);
      for (int j = lo; j <= i; ++j) {
        double s = entry(i, j);
        const int klo = std::max(lo, j - bw_);
        for (int k = klo; k < j; ++k) s -= at(i, k) * at(j, k);
        if (i == j) {
          if (s <= 0.0) fail(ErrorCode::not_spd, "banded Cholesky: stiffness matrix not positive definite");
          at(i, i) = std::sqrt(s);
        } else {
          at(i, j) = s / at(j, j);
        }
      }
    }
  }

  void solve(std::vector<double>& b) const {
    for (int i = 0; i < m_; ++i) {
      double s = b[i];
      for (int k = std::max(0, i - bw_); k < i; ++k) s -= at(i, k) * b[k];
      b[i] = s / at(i, i);
    }
    for (int i = m_ - 1; i >= 0; --i) {
      double s = b[i];
      const int hi = std::min(m_ - 1, i + bw_);
      for (int k = i + 1; k <= hi; ++k) s -= at(k, i) * b[k];
      b[i] = s / at(i, i);
    }
  }

 private:
  double entry(int p, int q) const {
    if (p == q) return 8.0 / 3.0;
    const int pi = p % side_, pj = p / side_, qi = q % side_, qj = q / side_;
    return (std::abs(pi - qi) <= 1 && std::abs(pj - qj) <= 1) ? -1.0 / 3.0 : 0.0;
  }
  double& at(int i, int j) { return l_[static_cast<std::size_t>(i) * (bw_ + 1) + (j - i + bw_)]; }
  double at(int i, int j) const { return l_[static_cast<std::size_t>(i) * (bw_ + 1) + (j - i + bw_)]; }

  int side_;
  int m_;
  int bw_;
  std::vector<double> l_;
};

void direct_solve(const BandedCholesky& chol, const Padded& b, Padded& x) {
  const int side = b.n - 1;
  std::vector<double> z(static_cast<std::size_t>(side) * side);
  for (int j = 1; j < b.n; ++j)
    for (int i = 1; i < b.n; ++i) z[static_cast<std::size_t>(i - 1) + static_cast<std::size_t>(side) * (j - 1)] = b(i, j);
  chol.solve(z);
  for (int j = 1; j < b.n; ++j)
    for (int i = 1; i < b.n; ++i) x(i, j) = z[static_cast<std::size_t>(i - 1) + static_cast<std::size_t>(side) * (j - 1)];
}

// Full weighting, transpose of bilinear prolongation.
void restrict_full_weighting(const Padded& r, Padded& rc) {
  for (int J = 1; J < rc.n; ++J)
    for (int I = 1; I < rc.n; ++I) {
      const int i = 2 * I, j = 2 * J;
      rc(I, J) = r(i, j) + 0.5 * (r(i - 1, j) + r(i + 1, j) + r(i, j - 1) + r(i, j + 1)) +
                 0.25 * (r(i - 1, j - 1) + r(i + 1, j - 1) + r(i - 1, j + 1) + r(i + 1, j + 1));
    }
}

void prolongate_add(const Padded& ec, Padded& x) {
  for (int j = 1; j < x.n; ++j)
    for (int i = 1; i < x.n; ++i) {
      const int I = i / 2, J = j / 2;
      double e;
      if (i % 2 == 0 && j % 2 == 0)
        e = ec(I, J);
      else if (j % 2 == 0)
        e = 0.5 * (ec(I, J) + ec(I + 1, J));
      else if (i % 2 == 0)
        e = 0.5 * (ec(I, J) + ec(I, J + 1));
      else
        e = 0.25 * (ec(I, J) + ec(I + 1, J) + ec(I, J + 1) + ec(I + 1, J + 1));
      x(i, j) += e;
    }
}

}  // namespace

struct PoissonSolver::Impl {
  std::vector<int> sizes;  // sizes[0] = n, coarsest last
  std::unique_ptr<BandedCholesky> coarse;

  void vcycle(std::size_t level, Padded& x, const Padded& b, const EllipticConfig& cfg) const {
    if (level + 1 == sizes.size()) {
      direct_solve(*coarse, b, x);
      return;
    }
    for (int s = 0; s < cfg.pre_sweeps; ++s) {
      gauss_seidel_colour(x, b, 0);
      gauss_seidel_colour(x, b, 1);
    }
    Padded r(x.n);
    residual(x, b, r);
    Padded rc(sizes[level + 1]);
    restrict_full_weighting(r, rc);
    Padded ec(sizes[level + 1]);
    vcycle(level + 1, ec, rc, cfg);
    prolongate_add(ec, x);
    for (int s = 0; s < cfg.post_sweeps; ++s) {
      gauss_seidel_colour(x, b, 1);
      gauss_seidel_colour(x, b, 0);
    }
  }
};

PoissonSolver::PoissonSolver(int n, EllipticConfig config) : n_(n), config_(config), impl_(std::make_unique<Impl>()) {
  require(n >= 2, "Poisson solver needs n >= 2");
  require(config.tol > 0.0 && config.tol <= 1e-4, "Poisson tolerance must lie in (0, 1e-4]");
  require(config.max_cycles >= 1, "Poisson solver needs max_cycles >= 1");
  require(config.pre_sweeps + config.post_sweeps >= 1, "Poisson multigrid needs at least one smoothing sweep");
  int m = n;
  impl_->sizes.push_back(m);
  while (m > config.n_direct && m % 2 == 0 && m / 2 >= 2) {
    m /= 2;
    impl_->sizes.push_back(m);
  }
  impl_->coarse = std::make_unique<BandedCholesky>(m);
}

PoissonSolver::~PoissonSolver() = default;

NodalField PoissonSolver::solve(const NodalField& rhs, PoissonStats* stats) const {
  require(rhs.n() == n_, "Poisson solve: right-hand side on the wrong level");
  const Padded b = pad(rhs);
  Padded x(n_);
  const double bnorm = interior_norm(b);
  PoissonStats st;
  if (bnorm == 0.0) {
    if (stats) *stats = st;
    return unpad(x);
  }
  Padded r(n_);
  if (impl_->sizes.size() == 1) {
    direct_solve(*impl_->coarse, b, x);
    residual(x, b, r);
    st.rel_residual = interior_norm(r) / bnorm;
  } else {
    double rel = 1.0;
    while (true) {
      impl_->vcycle(0, x, b, config_);
      ++st.cycles;
      residual(x, b, r);
      rel = interior_norm(r) / bnorm;
      if (rel <= config_.tol) break;
      if (st.cycles >= config_.max_cycles) {
        std::ostringstream msg;
        msg << "Poisson multigrid did not converge at n=" << n_ << " after " << st.cycles
            << " cycles (relative residual " << rel << ")";
        fail(ErrorCode::not_converged, msg.str());
      }
    }
    st.rel_residual = rel;
  }
  if (stats) *stats = st;
  return unpad(x);
}

NodalField poisson_solve(const NodalField& rhs, const EllipticConfig& config, PoissonStats* stats) {
  return PoissonSolver(rhs.n(), config).solve(rhs, stats);
}

NodalField apply_load(const CellField& u) {
  const int n = u.n();
  require(n >= 2, "apply_load needs n >= 2");
  Padded p(n);
  const double w = 0.25 / (static_cast<double>(n) * n);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double c = w * u.at(ix, iy);
      p(ix, iy) += c;
      p(ix + 1, iy) += c;
      p(ix, iy + 1) += c;
      p(ix + 1, iy + 1) += c;
    }
  return unpad(p);
}

CellField apply_load_transpose(const NodalField& y) {
  const int n = y.n();
  const Padded p = pad(y);
  CellField out(n);
  const double w = 0.25 / (static_cast<double>(n) * n);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      out.at(ix, iy) = w * (p(ix, iy) + p(ix + 1, iy) + p(ix, iy + 1) + p(ix + 1, iy + 1));
  return out;
}

NodalField apply_stiffness(const NodalField& y) {
  const Padded p = pad(y);
  NodalField out(y.n());
  for (int j = 1; j < y.n(); ++j)
    for (int i = 1; i < y.n(); ++i) out.at(i, j) = (8.0 * p(i, j) - neighbour_sum(p, i, j)) / 3.0;
  return out;
}

NodalField apply_nodal_mass(const NodalField& y) {
  const Padded p = pad(y);
  NodalField out(y.n());
  const double h2 = 1.0 / (static_cast<double>(y.n()) * y.n());
  for (int j = 1; j < y.n(); ++j)
    for (int i = 1; i < y.n(); ++i) {
      const double edges = p(i - 1, j) + p(i + 1, j) + p(i, j - 1) + p(i, j + 1);
      const double corners = p(i - 1, j - 1) + p(i + 1, j - 1) + p(i - 1, j + 1) + p(i + 1, j + 1);
      out.at(i, j) = h2 / 36.0 * (16.0 * p(i, j) + 4.0 * edges + corners);
    }
  return out;
}

EllipticBackend::EllipticBackend(EllipticConfig config) : config_(config) {
  require(config.tol > 0.0 && config.tol <= 1e-4, "elliptic inner tolerance must lie in (0, 1e-4]");
}

const PoissonSolver& EllipticBackend::solver(int n) const {
  std::lock_guard lock(mutex_);
  auto& slot = solvers_[n];
  if (!slot) slot = std::make_unique<PoissonSolver>(n, config_);
  return *slot;
}

NodalField EllipticBackend::apply_K(const CellField& u) const { return solver(u.n()).solve(apply_load(u)); }

CellField EllipticBackend::apply_Kadj(const NodalField& y) const {
  const NodalField p = solver(y.n()).solve(apply_nodal_mass(y));
  CellField out = apply_load_transpose(p);
  out *= static_cast<double>(y.n()) * y.n();
  return out;
}

CellField EllipticBackend::apply_KtK(const CellField& u) const { return apply_Kadj(apply_K(u)); }

}  // namespace ssnmg
