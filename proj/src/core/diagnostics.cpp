#include "ssnmg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ssnmg/error.hpp"
#include "ssnmg/hessian.hpp"
#include "ssnmg/mgprec.hpp"

namespace ssnmg {

DenseOperator materialize(const LinearMap& op, const InactiveMask& mask) {
  DenseOperator out;
  out.basis = mask.indices();
  out.n = mask.n();
  if (out.basis.size() > kDenseGuard)
    fail(ErrorCode::dimension_guard, "materialize: masked dimension " + std::to_string(out.basis.size()) +
                                         " exceeds the dense guard");
  const int m = static_cast<int>(out.basis.size());
  out.matrix = DenseMatrix(m);
  for (int c = 0; c < m; ++c) {
    CellField e(mask.n());
    e[out.basis[c]] = 1.0;
    const CellField col = op(e);
    if (col.n() != mask.n()) fail(ErrorCode::level_mismatch, "materialize: operator changed the level");
    for (int r = 0; r < m; ++r) out.matrix(r, c) = col[out.basis[r]];
  }
  return out;
}

CellField apply_dense(const DenseOperator& op, const CellField& v) {
  std::vector<double> x(op.basis.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = v[op.basis[i]];
  const auto y = op.matrix * x;
  CellField out(op.n);
  for (std::size_t i = 0; i < y.size(); ++i) out[op.basis[i]] = y[i];
  return out;
}

namespace {

DenseMatrix checked_symmetric(const DenseMatrix& x, const char* which) {
  const double scale = max_abs(x);
  double worst = 0.0;
  for (int i = 0; i < x.m; ++i)
    for (int j = i + 1; j < x.m; ++j) worst = std::max(worst, std::abs(x(i, j) - x(j, i)));
  if (worst > 1e-6 * scale)
    fail(ErrorCode::not_spd, std::string("spectral_distance: ") + which + " is not symmetric");
  return symmetrized(x);
}

}  // namespace

double spectral_distance(const DenseMatrix& a_in, const DenseMatrix& b_in) {
  require(a_in.m == b_in.m && a_in.m > 0, "spectral_distance: dimension mismatch");
  const DenseMatrix a = checked_symmetric(a_in, "A");
  const DenseMatrix b = checked_symmetric(b_in, "B");
  const DenseMatrix l = cholesky(b);
  const int m = a.m;
  // C = L^-1 A L^-T, column by column.
  DenseMatrix y(m);  // L^-1 A
  std::vector<double> col(m);
  for (int c = 0; c < m; ++c) {
    for (int i = 0; i < m; ++i) {
      double s = a(i, c);
      for (int k = 0; k < i; ++k) s -= l(i, k) * y(k, c);
      y(i, c) = s / l(i, i);
    }
  }
  DenseMatrix cmat(m);  // (L^-1 (L^-1 A)^T)^T
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i < m; ++i) {
      double s = y(r, i);
      for (int k = 0; k < i; ++k) s -= l(i, k) * cmat(r, k);
      cmat(r, i) = s / l(i, i);
    }
  }
  const auto ev = symmetric_eigenvalues(symmetrized(cmat));
  if (!(ev.front() > 0.0)) fail(ErrorCode::not_spd, "spectral_distance: A is not positive definite");
  return std::max(std::abs(std::log(ev.front())), std::abs(std::log(ev.back())));
}

double spectral_distance(const DenseOperator& a, const DenseOperator& b) {
  require(a.basis == b.basis, "spectral_distance: operators live on different subspaces");
  return spectral_distance(a.matrix, b.matrix);
}

std::vector<RateRow> two_grid_rate_study(const std::function<InactiveMask(int)>& mask_at,
                                         std::shared_ptr<const OperatorBackend> backend, double beta,
                                         const std::vector<int>& n_list) {
  require(!n_list.empty(), "two_grid_rate_study: empty n list");
  std::vector<RateRow> rows;
  for (int n : n_list) {
    require(n >= 4 && n % 2 == 0, "two_grid_rate_study: n must be even and at least 4");
    const InactiveMask fine = mask_at(n);
    if (fine.n() != n) fail(ErrorCode::level_mismatch, "two_grid_rate_study: mask has the wrong level");
    if (fine.count() > kDenseGuard) fail(ErrorCode::dimension_guard, "two_grid_rate_study: mask exceeds the dense guard");
    const InactiveMask coarse = coarsen_inactive_set(fine);

    HessianHandle h(backend, beta, n, fine);
    const DenseOperator hd = materialize([&](const CellField& v) { return h.apply_inactive(v); }, fine);
    BaseSolveConfig base;
    base.dense = true;
    MultigridPreconditioner mg(GridHierarchy(n / 2, 2), 1, 0, fine, beta, backend, base);
    const DenseOperator md = materialize([&](const CellField& v) { return mg.apply(v); }, fine);

    RateRow row;
    row.n = n;
    row.h = 1.0 / n;
    row.dim = fine.count();
    row.boundary_measure = numerical_boundary_measure(fine, coarse);
    row.distance = spectral_distance(md.matrix, spd_inverse(hd.matrix));
    rows.push_back(row);
  }
  return rows;
}

namespace {

TestVerdict monotone_test(std::vector<TestPoint> points, double slack, bool allow_two_to_three) {
  if (points.size() < 2) fail(ErrorCode::invalid_argument, "report_tests: need at least two data points");
  std::sort(points.begin(), points.end(), [](const TestPoint& x, const TestPoint& y) { return x.key < y.key; });
  TestVerdict v;
  std::ostringstream os;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& p = points[i - 1];
    const auto& q = points[i];
    if (allow_two_to_three && p.key == 2 && q.key == 3) continue;
    if (q.avg_iterations > p.avg_iterations + slack) {
      v.pass = false;
      v.violations.emplace_back(p.key, q.key);
      os << p.key << "->" << q.key << " (" << p.avg_iterations << " -> " << q.avg_iterations << ") ";
    }
  }
  v.summary = v.pass ? "pass" : "fail at " + os.str();
  if (!v.pass) v.summary.pop_back();
  return v;
}

}  // namespace

TestVerdict weak_test(std::vector<TestPoint> points, double slack) {
  return monotone_test(std::move(points), slack, false);
}

TestVerdict strong_test(std::vector<TestPoint> points, double slack) {
  return monotone_test(std::move(points), slack, true);
}

}  // namespace ssnmg
