#include "ssnmg/krylov.hpp"

#include <cmath>

#include "ssnmg/error.hpp"

namespace ssnmg {

const char* to_string(KrylovStatus s) {
  switch (s) {
    case KrylovStatus::converged: return "converged";
    case KrylovStatus::max_iterations: return "max_iterations";
    case KrylovStatus::spd_violation: return "spd_violation";
    case KrylovStatus::prec_not_positive: return "prec_not_positive";
  }
  return "unknown";
}

namespace {

void check_config(const KrylovConfig& c) {
  require(c.rel_tol > 0.0 && c.rel_tol < 1.0, "krylov: rel_tol must lie in (0, 1)");
  require(c.max_iter >= 1, "krylov: max_iter must be at least 1");
}

// prec == nullptr runs plain CG.
KrylovResult solve(const LinearMap& op, const LinearMap* prec, const CellField& b, const KrylovConfig& cfg) {
  check_config(cfg);
  require(b.all_finite(), "krylov: right-hand side is not finite");
  KrylovResult out{CellField(b.n()), {}};
  SolveReport& rep = out.report;

  CellField r = b;
  const double r0 = l2_norm(r);
  if (cfg.record_residuals) rep.history.push_back(r0 > 0.0 ? 1.0 : 0.0);
  if (r0 == 0.0) {
    rep.converged = true;
    rep.status = KrylovStatus::converged;
    return out;
  }

  CellField z = prec ? (*prec)(r) : r;
  double rz = l2_inner(r, z);
  if (!(rz > 0.0)) {
    rep.status = KrylovStatus::prec_not_positive;
    rep.rel_residual = 1.0;
    return out;
  }
  CellField p = z;
  double rel = 1.0;

  for (int k = 1; k <= cfg.max_iter; ++k) {
    const CellField q = op(p);
    const double pq = l2_inner(p, q);
    if (!(pq > 0.0)) {
      rep.status = KrylovStatus::spd_violation;
      rep.iterations = k - 1;
      rep.rel_residual = rel;
      return out;
    }
    const double alpha = rz / pq;
    out.x.axpy(alpha, p);
    r.axpy(-alpha, q);
    rel = l2_norm(r) / r0;
    rep.iterations = k;
    if (cfg.record_residuals) rep.history.push_back(rel);
    if (rel <= cfg.rel_tol) {
      rep.converged = true;
      rep.status = KrylovStatus::converged;
      rep.rel_residual = rel;
      return out;
    }
    CellField z_new = prec ? (*prec)(r) : r;
    const double rz_new = l2_inner(r, z_new);
    if (!(rz_new > 0.0)) {
      rep.status = KrylovStatus::prec_not_positive;
      rep.rel_residual = rel;
      return out;
    }
    double beta = rz_new / rz;
    if (cfg.flexible) beta = (rz_new - l2_inner(r, z)) / rz;
    z = std::move(z_new);
    rz = rz_new;
    p *= beta;
    p += z;
  }
  rep.status = KrylovStatus::max_iterations;
  rep.rel_residual = rel;
  return out;
}

}  // namespace

KrylovResult cg(const LinearMap& op, const CellField& rhs, const KrylovConfig& config) {
  return solve(op, nullptr, rhs, config);
}

KrylovResult pcg(const LinearMap& op, const LinearMap& prec, const CellField& rhs, const KrylovConfig& config) {
  return solve(op, &prec, rhs, config);
}

}  // namespace ssnmg
