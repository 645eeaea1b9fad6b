#include "uzawamg/smoother.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "uzawamg/kernels.hpp"

namespace uzawamg {

namespace {

constexpr double kDiagGuard = 1e-14;

Vector sparse_diagonal(const SparseMatrix& M) {
  Vector d = Vector::Zero(M.rows());
  for (Index i = 0; i < M.rows(); ++i)
    for (SparseMatrix::InnerIterator it(M, i); it; ++it)
      if (it.col() == i) d[i] = it.value();
  return d;
}

// One symmetric Gauss-Seidel application to M with diagonal d:
// x = L^-T (d .* (L^-1 r)), where L is the lower triangular part of M.
Vector symgs_apply(const SparseMatrix& M, const Vector& d, const Vector& r) {
  Vector z = triangular_sweep(M, r, Part::Lower);
  z.array() *= d.array();
  return triangular_sweep(M, z, Part::Upper);
}

} // namespace

const char* to_string(SmootherClass cls) {
  switch (cls) {
    case SmootherClass::Diagonal: return "diagonal";
    case SmootherClass::Lower: return "lower";
    case SmootherClass::Upper: return "upper";
    case SmootherClass::Factorization: return "factorization";
    case SmootherClass::Symmetric: return "symmetric";
    case SmootherClass::BraessSarazin: return "braess_sarazin";
  }
  return "?";
}

const char* to_string(AHatKind kind) {
  switch (kind) {
    case AHatKind::Jacobi: return "jacobi";
    case AHatKind::ForwardGS: return "forward_gs";
    case AHatKind::BackwardGS: return "backward_gs";
    case AHatKind::SymmetricGS: return "symmetric_gs";
  }
  return "?";
}

const char* to_string(SHatKind kind) {
  switch (kind) {
    case SHatKind::DampedJacobiMass: return "damped_jacobi_mass";
    case SHatKind::DampedGSC: return "damped_gs_C";
    case SHatKind::DampedSymGSC: return "damped_symgs_C";
  }
  return "?";
}

void validate_spec(const SmootherSpec& spec) {
  if (!(spec.omega > 0.0)) throw std::invalid_argument("SmootherSpec: omega must be positive");
  const bool needs_spd_a = spec.cls == SmootherClass::Diagonal ||
                           spec.cls == SmootherClass::Lower || spec.cls == SmootherClass::Upper ||
                           spec.cls == SmootherClass::Factorization;
  if (needs_spd_a && !spec.a_hat_symmetric())
    throw std::invalid_argument(std::string("SmootherSpec: class ") + to_string(spec.cls) +
                                " requires a symmetric A-hat (jacobi or symmetric_gs)");
  if (spec.cls == SmootherClass::BraessSarazin && !(spec.alpha > 0.0))
    throw std::invalid_argument("SmootherSpec: braess_sarazin requires alpha > 0");
}

Smoother::Smoother(const SaddlePointSystem& sys, const SparseMatrix& Mq, SmootherSpec spec)
    : sys_(&sys), Mq_(&Mq), spec_(spec) {
  validate_spec(spec_);
  diag_A_ = sparse_diagonal(sys.A);
  if ((diag_A_.array() == 0.0).any())
    throw std::runtime_error("Smoother: zero diagonal entry in A");
  diag_Mq_ = sparse_diagonal(Mq);
  if ((diag_Mq_.array() == 0.0).any())
    throw std::runtime_error("Smoother: zero diagonal entry in M_q");
  diag_C_ = sparse_diagonal(sys.C).cwiseMax(kDiagGuard);

  // Sweeps over C need the guarded diagonal materialized.
  const Vector raw_diag_c = sparse_diagonal(sys.C);
  if ((raw_diag_c.array() < kDiagGuard).any()) {
    use_patch_ = true;
    C_patch_ = sys.C;
    std::vector<Triplet> extra;
    for (Index i = 0; i < raw_diag_c.size(); ++i)
      if (raw_diag_c[i] < kDiagGuard) extra.emplace_back(i, i, kDiagGuard - raw_diag_c[i]);
    SparseMatrix patch(sys.C.rows(), sys.C.cols());
    patch.setFromTriplets(extra.begin(), extra.end());
    C_patch_ = C_patch_ + patch;
    C_patch_.makeCompressed();
  }

  const double scale = std::max(1.0, diag_C_.maxCoeff());
  const Vector ones = Vector::Ones(sys.n_pressure_dofs);
  schur_singular_ = (sys.C * ones).cwiseAbs().maxCoeff() < 1e-12 * scale &&
                    (sys.B_T * ones).cwiseAbs().maxCoeff() < 1e-12;
}

const SparseMatrix& Smoother::c_sweep_matrix() const { return use_patch_ ? C_patch_ : sys_->C; }

Vector Smoother::apply_a_hat_inverse(const Vector& r, bool transposed) const {
  switch (spec_.a_hat) {
    case AHatKind::Jacobi:
      return r.cwiseQuotient(diag_A_);
    case AHatKind::ForwardGS:
      return triangular_sweep(sys_->A, r, transposed ? Part::Upper : Part::Lower);
    case AHatKind::BackwardGS:
      return triangular_sweep(sys_->A, r, transposed ? Part::Lower : Part::Upper);
    case AHatKind::SymmetricGS:
      return symgs_a_inverse(r);
  }
  throw std::logic_error("apply_a_hat_inverse: unknown kind");
}

Vector Smoother::symgs_a_inverse(const Vector& r) const { return symgs_apply(sys_->A, diag_A_, r); }

Vector Smoother::apply_s_hat_inverse(const Vector& r, bool transposed) const {
  switch (spec_.s_hat) {
    case SHatKind::DampedJacobiMass:
      return spec_.omega * r.cwiseQuotient(diag_Mq_);
    case SHatKind::DampedGSC:
      return spec_.omega *
             triangular_sweep(c_sweep_matrix(), r, transposed ? Part::Upper : Part::Lower);
    case SHatKind::DampedSymGSC:
      return spec_.omega * symgs_apply(c_sweep_matrix(), diag_C_, r);
  }
  throw std::logic_error("apply_s_hat_inverse: unknown kind");
}

Vector Smoother::schur_solve(const Vector& rhs) const {
  const Vector d_alpha_inv = (spec_.alpha * diag_A_).cwiseInverse();
  Vector b = rhs;
  const Index m = b.size();
  if (schur_singular_) b.array() -= b.sum() / static_cast<double>(m);
  auto apply = [&](const Vector& q, Vector& out) {
    out.noalias() = sys_->C * q;
    out.noalias() += sys_->B * d_alpha_inv.cwiseProduct(sys_->B_T * q);
    if (schur_singular_) out.array() -= out.sum() / static_cast<double>(m);
  };
  const auto res = cg_solve_op(apply, b, 1e-10, 500);
  if (!res.converged)
    throw std::runtime_error("Smoother: Braess-Sarazin inner Schur CG did not converge");
  return res.x;
}

void Smoother::step(Vector& u, Vector& p, const Vector& f, const Vector& g, bool adjoint) const {
  const SaddlePointSystem& s = *sys_;
  if (adjoint) {
    Vector ru = f - s.A * u - s.B_T * p;
    Vector rp = g - s.B * u + s.C * p;
    Vector du, dp;
    apply_preconditioner_inverse(ru, rp, du, dp, /*transposed=*/true);
    u += du;
    p += dp;
    return;
  }
  switch (spec_.cls) {
    case SmootherClass::Diagonal: {
      Vector ru = f - s.A * u - s.B_T * p;
      Vector rp = g - s.B * u + s.C * p;
      u += apply_a_hat_inverse(ru);
      p -= apply_s_hat_inverse(rp);
      return;
    }
    case SmootherClass::Lower: {
      Vector ru = f - s.A * u - s.B_T * p;
      u += apply_a_hat_inverse(ru);
      Vector rp = g - s.B * u + s.C * p;
      p -= apply_s_hat_inverse(rp);
      return;
    }
    case SmootherClass::Upper: {
      Vector rp = g - s.B * u + s.C * p;
      p -= apply_s_hat_inverse(rp, /*transposed=*/true);
      Vector ru = f - s.A * u - s.B_T * p;
      u += apply_a_hat_inverse(ru, /*transposed=*/true);
      return;
    }
    case SmootherClass::Factorization: {
      Vector base = f - s.A * u; // velocity residual without the pressure part
      Vector u_star = u + apply_a_hat_inverse(base - s.B_T * p);
      Vector rp = g - s.B * u_star + s.C * p;
      p -= apply_s_hat_inverse(rp);
      u += apply_a_hat_inverse(base - s.B_T * p);
      return;
    }
    case SmootherClass::Symmetric: {
      Vector u_star = u + apply_a_hat_inverse(f - s.A * u - s.B_T * p);
      Vector rp = g - s.B * u_star + s.C * p;
      p -= apply_s_hat_inverse(rp);
      u = u_star + apply_a_hat_inverse(f - s.A * u_star - s.B_T * p, /*transposed=*/true);
      return;
    }
    case SmootherClass::BraessSarazin: {
      const Vector d_alpha_inv = (spec_.alpha * diag_A_).cwiseInverse();
      Vector base = f - s.A * u;
      Vector u_star = u + d_alpha_inv.cwiseProduct(base - s.B_T * p);
      Vector rp = g - s.B * u_star + s.C * p;
      p -= schur_solve(rp);
      u += d_alpha_inv.cwiseProduct(base - s.B_T * p);
      return;
    }
  }
  throw std::logic_error("Smoother::step: unknown class");
}

void Smoother::apply_preconditioner_inverse(const Vector& ru, const Vector& rp, Vector& du,
                                            Vector& dp, bool transposed) const {
  const SaddlePointSystem& s = *sys_;
  switch (spec_.cls) {
    case SmootherClass::Diagonal:
      du = apply_a_hat_inverse(ru, transposed);
      dp = -apply_s_hat_inverse(rp, transposed);
      return;
    case SmootherClass::Lower:
      if (!transposed) {
        du = apply_a_hat_inverse(ru);
        dp = apply_s_hat_inverse(s.B * du - rp);
      } else { // P_l^T has upper block triangular structure
        dp = -apply_s_hat_inverse(rp, true);
        du = apply_a_hat_inverse(ru - s.B_T * dp, true);
      }
      return;
    case SmootherClass::Upper:
      if (!transposed) {
        dp = -apply_s_hat_inverse(rp, true);
        du = apply_a_hat_inverse(ru - s.B_T * dp, true);
      } else { // P_u^T = P_l
        du = apply_a_hat_inverse(ru);
        dp = apply_s_hat_inverse(s.B * du - rp);
      }
      return;
    case SmootherClass::Factorization: {
      Vector w = apply_a_hat_inverse(ru, transposed);
      dp = -apply_s_hat_inverse(rp - s.B * w, transposed);
      du = w - apply_a_hat_inverse(s.B_T * dp, transposed);
      return;
    }
    case SmootherClass::Symmetric: {
      Vector w = apply_a_hat_inverse(ru, transposed);
      dp = -apply_s_hat_inverse(rp - s.B * w, transposed);
      du = w + apply_a_hat_inverse(ru - s.A * w - s.B_T * dp, !transposed);
      return;
    }
    case SmootherClass::BraessSarazin: {
      const Vector d_alpha_inv = (spec_.alpha * diag_A_).cwiseInverse();
      Vector w = d_alpha_inv.cwiseProduct(ru);
      dp = -schur_solve(rp - s.B * w);
      du = d_alpha_inv.cwiseProduct(ru - s.B_T * dp);
      return;
    }
  }
  throw std::logic_error("apply_preconditioner_inverse: unknown class");
}

Vector Smoother::iteration_operator_apply(const Vector& e) const {
  const Index n = sys_->n_velocity_dofs;
  const Index m = sys_->n_pressure_dofs;
  if (e.size() != n + m)
    throw std::invalid_argument("iteration_operator_apply: dimension mismatch");
  Vector u = e.head(n);
  Vector p = e.tail(m);
  step(u, p, Vector::Zero(n), Vector::Zero(m));
  Vector out(n + m);
  out << u, p;
  return out;
}

Vector Smoother::iteration_operator_transpose_apply(const Vector& e) const {
  const Index n = sys_->n_velocity_dofs;
  const Index m = sys_->n_pressure_dofs;
  if (e.size() != n + m)
    throw std::invalid_argument("iteration_operator_transpose_apply: dimension mismatch");
  Vector du, dp;
  apply_preconditioner_inverse(e.head(n), e.tail(m), du, dp, /*transposed=*/true);
  Vector t(n + m);
  t << du, dp;
  return e - saddle_apply(*sys_, t);
}

OmegaResult compute_omega(const SaddlePointSystem& sys, const SparseMatrix& Mq, double tol,
                          int max_iter, std::uint64_t seed, double omega_max) {
  const Index m = sys.n_pressure_dofs;
  Vector diag_a = sparse_diagonal(sys.A);
  Vector diag_mq = sparse_diagonal(Mq);
  const Vector d_weights = diag_mq; // inner product weight of the generalized problem

  // Deflate the constant-pressure direction only where it actually spans the
  // kernel (it does for the assembled Stokes systems, not for generic ones).
  const Vector ones = Vector::Ones(m);
  const double c_scale = std::max(1.0, diag_mq.cwiseAbs().maxCoeff());
  const bool kernel_const = (sys.C * ones).cwiseAbs().maxCoeff() < 1e-12 * c_scale &&
                            (sys.n_velocity_dofs == 0 ||
                             (sys.B_T * ones).cwiseAbs().maxCoeff() < 1e-12 * c_scale);
  auto deflate = [&](Vector& q) {
    if (kernel_const) q.array() -= q.dot(d_weights) / d_weights.sum();
  };
  auto apply_op = [&](const Vector& q) -> Vector {
    Vector y = sys.C * q;
    if (sys.n_velocity_dofs > 0) y.noalias() += sys.B * symgs_apply(sys.A, diag_a, sys.B_T * q);
    return y;
  };

  OmegaResult res;
  Vector q = random_vector(m, seed);
  deflate(q);
  if (q.norm() == 0.0) {
    q = random_vector(m, seed + 1);
    deflate(q);
    if (q.norm() == 0.0) throw std::runtime_error("compute_omega: zero start vector after re-seeding");
  }
  q /= q.norm();
  double lambda_old = 0.0;
  for (int k = 0; k < max_iter; ++k) {
    Vector y = apply_op(q);
    const double lambda = q.dot(y) / q.dot(d_weights.cwiseProduct(q));
    res.history.push_back(lambda);
    res.lambda_max = lambda;
    res.iterations = k + 1;
    Vector next = y.cwiseQuotient(diag_mq);
    deflate(next);
    const double nn = next.norm();
    if (nn == 0.0 || lambda <= 1e-300) { // degenerate operator, e.g. C = B = 0
      res.lambda_max = 0.0;
      res.converged = true;
      break;
    }
    q = next / nn;
    if (k > 0 && std::abs(lambda - lambda_old) <= tol * std::abs(lambda)) {
      res.converged = true;
      break;
    }
    lambda_old = lambda;
  }
  res.omega = res.lambda_max > 1e-300 ? std::min(1.0 / res.lambda_max, omega_max) : omega_max;
  return res;
}

ConditionReport validate_conditions(const Smoother& s, double tol, int max_iter,
                                    std::uint64_t seed) {
  const SaddlePointSystem& sys = s.system();
  ConditionReport report;

  // lambda_max(X^-1 A) with X the symmetric realization of A-hat: A-hat itself
  // for the symmetric kinds, its symmetrized Gauss-Seidel operator otherwise.
  Vector diag_a = s.diag_A();
  const bool sym = s.spec().a_hat_symmetric();
  auto apply_a = [&](const Vector& x, Vector& y) {
    Vector ax = sys.A * x;
    y = sym ? s.apply_a_hat_inverse(ax) : symgs_apply(sys.A, diag_a, ax);
  };
  const auto pr = power_method(apply_a, sys.n_velocity_dofs, tol, max_iter, seed);
  report.lambda_a_hat = pr.lambda;
  report.a_hat_ok = pr.lambda <= (sym ? 1.0 + 1e-8 : 2.0 - 1e-8);

  const auto omega_res = compute_omega(sys, s.Mq(), tol, max_iter, seed + 1);
  report.lambda_schur = omega_res.lambda_max;
  report.schur_margin = 1.0 / s.spec().omega - report.lambda_schur;
  report.schur_ok = report.schur_margin >= -1e-6;
  return report;
}

} // namespace uzawamg
