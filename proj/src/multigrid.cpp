#include "uzawamg/multigrid.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "uzawamg/kernels.hpp"

namespace uzawamg {

namespace {

DenseMatrix dense_block(const SparseMatrix& M) { return DenseMatrix(M); }

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

Multigrid::Multigrid(const StokesHierarchy& hierarchy, const SmootherSpec& smoother_spec,
                     int top_level, CycleSpec cycle)
    : hier_(&hierarchy), cycle_(cycle), top_level_(top_level) {
  if (top_level_ > hierarchy.max_level() || top_level_ < cycle_.coarse_level)
    throw std::invalid_argument("Multigrid: top level outside the assembled hierarchy");
  if (cycle_.gamma != 1 && cycle_.gamma != 2)
    throw std::invalid_argument("Multigrid: gamma must be 1 (V) or 2 (W)");

  smoothers_.resize(top_level_ + 1);
  for (int l = cycle_.coarse_level; l <= top_level_; ++l)
    smoothers_[l] = std::make_unique<Smoother>(hierarchy.system(l), hierarchy.norm(l).Mq(),
                                               smoother_spec);

  // Bordered coarse matrix [A B^T 0; B -C w; 0 w^T 0], w = M_q 1: pins the
  // pressure mean, which spans the nullspace of the saddle operator.
  const SaddlePointSystem& cs = hierarchy.system(cycle_.coarse_level);
  const NormOperator& cn = hierarchy.norm(cycle_.coarse_level);
  const Index n = cs.n_velocity_dofs;
  const Index m = cs.n_pressure_dofs;
  DenseMatrix K = DenseMatrix::Zero(n + m + 1, n + m + 1);
  K.topLeftCorner(n, n) = dense_block(cs.A);
  K.block(0, n, n, m) = dense_block(cs.B_T);
  K.block(n, 0, m, n) = dense_block(cs.B);
  K.block(n, n, m, m) = -dense_block(cs.C);
  const Vector w = cn.Mq() * Vector::Ones(m);
  K.block(n, n + m, m, 1) = w;
  K.block(n + m, n, 1, m) = w.transpose();
  coarse_lu_.compute(K);
  const double pivot_min = coarse_lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (pivot_min < 1e-14 * K.cwiseAbs().maxCoeff())
    throw std::runtime_error("Multigrid: coarse factorization is singular");
}

void Multigrid::coarse_solve(const Vector& f, const Vector& g, Vector& u, Vector& p) const {
  const SaddlePointSystem& cs = hier_->system(cycle_.coarse_level);
  const Index n = cs.n_velocity_dofs;
  const Index m = cs.n_pressure_dofs;
  Vector rhs(n + m + 1);
  rhs << f, g, 0.0;
  const Vector sol = coarse_lu_.solve(rhs);
  u = sol.head(n);
  p = sol.segment(n, m);
}

void Multigrid::cycle(int level, Vector& u, Vector& p, const Vector& f, const Vector& g) const {
  if (level == cycle_.coarse_level) {
    coarse_solve(f, g, u, p);
    return;
  }
  const SaddlePointSystem& sys = hier_->system(level);
  const Smoother& smoother = *smoothers_[level];
  const TransferOperator& transfer = hier_->transfers[level - 1];

  for (int k = 0; k < cycle_.pre_steps(); ++k) smoother.step(u, p, f, g);

  Vector ru = f;
  ru.noalias() -= sys.A * u;
  ru.noalias() -= sys.B_T * p;
  Vector rp = g;
  rp.noalias() -= sys.B * u;
  rp.noalias() += sys.C * p;

  Vector fc = restrict_velocity(transfer, ru);
  Vector gc = transfer.pressure.transpose() * rp;

  const SaddlePointSystem& coarse_sys = hier_->system(level - 1);
  Vector wc = Vector::Zero(coarse_sys.n_velocity_dofs);
  Vector rc = Vector::Zero(coarse_sys.n_pressure_dofs);
  for (int i = 0; i < cycle_.gamma; ++i) cycle(level - 1, wc, rc, fc, gc);

  u += prolongate_velocity(transfer, wc);
  p.noalias() += transfer.pressure * rc;

  const bool adjoint = cycle_.post_smoother == PostSmoother::Adjoint;
  for (int k = 0; k < cycle_.post_steps(); ++k) smoother.step(u, p, f, g, adjoint);

  p.array() -= hier_->norm(level).pressure_mean(p);
}

SolveResult Multigrid::solve(const Vector* f, const Vector* g) const {
  const SaddlePointSystem& sys = hier_->system(top_level_);
  const NormOperator& norm = hier_->norm(top_level_);
  const Index n = sys.n_velocity_dofs;
  const Index m = sys.n_pressure_dofs;
  const Vector fv = f ? *f : Vector::Zero(n);
  const Vector gv = g ? *g : Vector::Zero(m);

  Vector x = random_vector(n + m, cycle_.seed);
  Vector u = x.head(n);
  Vector p = x.tail(m);

  SolveResult result;
  const auto t0 = std::chrono::steady_clock::now();
  Vector r = saddle_residual(sys, x, fv, gv);
  const double r0 = norm.dual_value(r);
  result.trace.push_back({0, r0, 0.0});
  if (r0 == 0.0) {
    result.converged = true;
    return result;
  }
  double prev = r0;
  for (int it = 1; it <= cycle_.max_iterations; ++it) {
    cycle(top_level_, u, p, fv, gv);
    Vector state(n + m);
    state << u, p;
    r = saddle_residual(sys, state, fv, gv);
    const double rn = norm.dual_value(r);
    result.trace.push_back({it, rn, seconds_since(t0)});
    result.iterations = it;
    result.final_rate = rn / prev;
    prev = rn;
    if (rn <= cycle_.epsilon * r0) {
      result.converged = true;
      break;
    }
    if (rn > 1e6 * r0) {
      result.diverged = true;
      break;
    }
  }
  return result;
}

RateResult Multigrid::asymptotic_rate(int max_cycles) const {
  const SaddlePointSystem& sys = hier_->system(top_level_);
  const NormOperator& norm = hier_->norm(top_level_);
  const Index n = sys.n_velocity_dofs;
  const Index m = sys.n_pressure_dofs;
  const Vector fv = Vector::Zero(n);
  const Vector gv = Vector::Zero(m);

  // Zero right-hand side: the iterate is the error.
  Vector x = random_vector(n + m, cycle_.seed);
  Vector u = x.head(n);
  Vector p = x.tail(m);
  Vector state(n + m);
  state << u, p;
  const double e0 = norm.value(state);

  RateResult result;
  double prev = e0;
  for (int it = 1; it <= max_cycles; ++it) {
    cycle(top_level_, u, p, fv, gv);
    state << u, p;
    const double e = norm.value(state);
    result.cycles = it;
    const double ratio = e / prev;
    // Usable window: past the transient, above finite-precision noise. The
    // last five ratios before the floor enter the geometric mean.
    if (e < 1e-4 * e0 && e > 1e-12 * e0) {
      result.ratios.push_back(ratio);
      if (result.ratios.size() > 5) result.ratios.erase(result.ratios.begin());
    }
    prev = e;
    if (e <= 1e-12 * e0) break;
    if (e > 1e8 * e0) break; // divergent configuration
  }
  if (!result.ratios.empty()) {
    double log_sum = 0.0;
    for (double q : result.ratios) log_sum += std::log(q);
    result.rate = std::exp(log_sum / static_cast<double>(result.ratios.size()));
  } else {
    result.rate = std::numeric_limits<double>::quiet_NaN();
  }
  result.enough_ratios = result.ratios.size() == 5;
  return result;
}

} // namespace uzawamg
