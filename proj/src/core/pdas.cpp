#include "ssnmg/pdas.hpp"

#include <algorithm>
#include <cmath>

#include "ssnmg/error.hpp"
#include "ssnmg/hessian.hpp"

namespace ssnmg {

ProblemInstance::ProblemInstance(std::shared_ptr<const OperatorBackend> backend, double beta, CellField a, CellField b,
                                 CellField f)
    : backend_(std::move(backend)), beta_(beta), a_(std::move(a)), b_(std::move(b)), f_(std::move(f)) {
  require(backend_ != nullptr, "instance: backend is null");
  require(beta > 0.0, "instance: beta must be positive");
  if (a_.n() != f_.n() || b_.n() != f_.n()) fail(ErrorCode::level_mismatch, "instance: bounds and data differ in level");
  require(a_.all_finite() && b_.all_finite() && f_.all_finite(), "instance: non-finite data");
  for (std::size_t i = 0; i < f_.size(); ++i) require(a_[i] < b_[i], "instance: lower bound must be below upper bound");
}

ProblemInstance instance_from_target(std::shared_ptr<const OperatorBackend> backend, double beta, CellField a,
                                     CellField b, const CellField& u_d) {
  CellField f = backend->apply_KtK(u_d);
  return ProblemInstance(std::move(backend), beta, std::move(a), std::move(b), std::move(f));
}

ActivePartition update_sets(const CellField& u, const CellField& lambda, const CellField& a, const CellField& b,
                            double beta) {
  const int n = u.n();
  if (lambda.n() != n || a.n() != n || b.n() != n) fail(ErrorCode::level_mismatch, "update_sets: level mismatch");
  ActivePartition p(n);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (lambda[i] + beta * (a[i] - u[i]) >= 0.0)
      p.set(i, CellState::lower);
    else if (lambda[i] + beta * (b[i] - u[i]) <= 0.0)
      p.set(i, CellState::upper);
  }
  return p;
}

const char* to_string(PdasStatus s) {
  switch (s) {
    case PdasStatus::converged: return "converged";
    case PdasStatus::max_outer: return "max_outer";
    case PdasStatus::linear_failure: return "linear_failure";
  }
  return "unknown";
}

int PdasResult::total_linear_iterations() const {
  int t = 0;
  for (const auto& s : state.history) t += s.linear.iterations;
  return t;
}

double PdasResult::average_linear_iterations() const {
  int steps = 0;
  for (const auto& s : state.history)
    if (!s.solve_skipped) ++steps;
  return steps == 0 ? 0.0 : static_cast<double>(total_linear_iterations()) / steps;
}

namespace {

int levels_between(int n_base, int n) {
  require(n_base >= 2 && n_base < n, "mgcg: base side count must be in [2, n)");
  int j = 0;
  int m = n_base;
  while (m < n) {
    m *= 2;
    ++j;
  }
  require(m == n, "mgcg: n must be n_base times a power of two");
  return j;
}

}  // namespace

PdasResult pdas_solve(const ProblemInstance& inst, const SolverChoice& solver, const PdasOptions& opt,
                      const std::optional<SsnmState>& init) {
  require(opt.max_outer >= 1, "pdas: max_outer must be at least 1");
  const int n = inst.n();
  const double beta = inst.beta();
  const CellField& a = inst.a();
  const CellField& b = inst.b();
  const CellField& f = inst.f();

  int j = 0;
  if (solver.kind == SolverKind::mgcg) j = levels_between(solver.n_base, n);
  const GridHierarchy hierarchy(solver.kind == SolverKind::mgcg ? solver.n_base : n, j + 1);

  PdasResult res;
  res.solver_used = solver.kind;
  SsnmState& st = res.state;
  if (init) {
    if (init->u.n() != n || init->lambda.n() != n) fail(ErrorCode::level_mismatch, "pdas: initial state level mismatch");
    st.u = init->u;
    st.lambda = init->lambda;
  } else {
    st.u = CellField(n);
    // A start on a bound ties into the active sets everywhere, and from there
    // the iteration can cycle; start strictly inside so the first step is the
    // unconstrained solve.
    for (std::size_t i = 0; i < st.u.size(); ++i) {
      const double z = std::clamp(0.0, a[i], b[i]);
      st.u[i] = (z > a[i] && z < b[i]) ? z : 0.5 * (a[i] + b[i]);
    }
    st.lambda = CellField(n);
  }
  st.partition = update_sets(st.u, st.lambda, a, b, beta);

  HessianHandle full(inst.backend(), beta, n);
  KrylovConfig kcfg;
  kcfg.rel_tol = opt.lin_tol;
  kcfg.max_iter = opt.lin_max_iter;
  kcfg.flexible = opt.flexible;

  for (int it = 1; it <= opt.max_outer; ++it) {
    const ActivePartition& part = st.partition;
    OuterStep step;
    step.n_inactive = part.count(CellState::inactive);
    step.n_lower = part.count(CellState::lower);
    step.n_upper = part.count(CellState::upper);

    CellField u_active(n);
    for (std::size_t i = 0; i < u_active.size(); ++i) {
      if (part[i] == CellState::lower) u_active[i] = a[i];
      if (part[i] == CellState::upper) u_active[i] = b[i];
    }

    CellField u = u_active;
    if (step.n_inactive == 0) {
      step.solve_skipped = true;
      step.linear.converged = true;
      step.linear.status = KrylovStatus::converged;
    } else {
      const InactiveMask inactive = part.inactive_mask();
      const CellField rhs = subsystem_rhs(full, f, u_active, part);
      HessianHandle hi(inst.backend(), beta, n, inactive);
      const LinearMap op = [&hi](const CellField& x) { return hi.apply_inactive(x); };
      try {
        KrylovResult kr;
        if (solver.kind == SolverKind::cg) {
          kr = cg(op, rhs, kcfg);
        } else {
          MultigridPreconditioner mg(hierarchy, j, 0, inactive, beta, inst.backend(), opt.base);
          kr = pcg(op, [&mg](const CellField& v) { return mg.apply(v); }, rhs, kcfg);
          for (int k = 0; k < j; ++k) res.hessian_applies[hierarchy.n(k)] += mg.hessian_applies(k);
          res.base_solves += mg.base_solves();
        }
        step.linear = std::move(kr.report);
        u += kr.x;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::not_converged && e.code() != ErrorCode::not_spd) throw;
        res.hessian_applies[n] += hi.applies();
        st.history.push_back(step);
        st.outer_iterations = it;
        res.status = PdasStatus::linear_failure;
        res.message = e.what();
        return res;
      }
      res.hessian_applies[n] += hi.applies();
    }

    st.u = std::move(u);
    st.lambda = recover_multiplier(full, st.u, f, part);
    res.hessian_applies[n] += full.applies();
    full.reset_counter();
    st.history.push_back(step);
    st.outer_iterations = it;

    if (!step.linear.converged) {
      res.status = PdasStatus::linear_failure;
      res.message = std::string("inner solve stopped with ") + to_string(step.linear.status);
      return res;
    }
    ActivePartition next = update_sets(st.u, st.lambda, a, b, beta);
    if (next == st.partition) {
      res.status = PdasStatus::converged;
      return res;
    }
    st.partition = std::move(next);
  }
  res.status = PdasStatus::max_outer;
  res.message = "active sets did not settle within " + std::to_string(opt.max_outer) + " outer iterations";
  return res;
}

double kkt_residual(const SsnmState& st, const ProblemInstance& inst) {
  const double beta = inst.beta();
  const CellField ktk = inst.backend()->apply_KtK(st.u);
  CellField r1 = ktk;
  r1.axpy(beta, st.u);
  r1 -= inst.f();
  r1 -= st.lambda;
  CellField r2(inst.n());
  for (std::size_t i = 0; i < r2.size(); ++i) {
    const double g = ktk[i] - inst.f()[i];
    r2[i] = st.lambda[i] - std::max(0.0, g + beta * inst.a()[i]) - std::min(0.0, g + beta * inst.b()[i]);
  }
  return std::max(l2_norm(r1), l2_norm(r2));
}

std::vector<PdasResult> nested_solve(const std::vector<ProblemInstance>& instances, const SolverChoice& solver,
                                     const PdasOptions& options) {
  require(!instances.empty(), "nested_solve: no levels");
  for (std::size_t i = 1; i < instances.size(); ++i)
    require(instances[i].n() == 2 * instances[i - 1].n(), "nested_solve: levels must double in n");
  std::vector<PdasResult> out;
  std::optional<SsnmState> init;
  for (const auto& inst : instances) {
    SolverChoice choice = solver;
    if (choice.kind == SolverKind::mgcg && inst.n() <= choice.n_base) choice.kind = SolverKind::cg;
    PdasResult r = pdas_solve(inst, choice, options, init);
    const bool ok = r.ok();
    SsnmState next;
    if (ok) {
      next.u = inject(r.state.u);
      next.lambda = inject(r.state.lambda);
    }
    out.push_back(std::move(r));
    if (!ok) break;
    init = std::move(next);
  }
  return out;
}

}  // namespace ssnmg
