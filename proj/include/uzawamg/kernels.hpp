#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "uzawamg/types.hpp"

namespace uzawamg {

/// y = M x with an explicit dimension check.
Vector spmv(const SparseMatrix& M, const Vector& x);

/// Solves T x = b where T is the lower or upper triangular part of M,
/// including the diagonal. Equivalent to one Gauss-Seidel half-sweep on the
/// residual b with zero initial guess. Throws on a zero diagonal entry.
Vector triangular_sweep(const SparseMatrix& M, const Vector& b, Part part);

struct CgResult {
  Vector x;
  bool converged = false;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Plain conjugate gradients for SPD operators. Non-convergence is flagged,
/// not thrown; callers decide.
template <class Op>
CgResult cg_solve_op(Op&& apply, const Vector& b, double tol, int max_iter) {
  CgResult res;
  const double bnorm = b.norm();
  res.x = Vector::Zero(b.size());
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  Vector r = b;
  Vector p = r;
  Vector Ap(b.size());
  double rr = r.squaredNorm();
  for (int k = 0; k < max_iter; ++k) {
    apply(p, Ap);
    const double pAp = p.dot(Ap);
    if (pAp <= 0.0) break; // operator not SPD on this subspace
    const double alpha = rr / pAp;
    res.x += alpha * p;
    r -= alpha * Ap;
    const double rr_new = r.squaredNorm();
    res.iterations = k + 1;
    if (std::sqrt(rr_new) <= tol * bnorm) {
      res.converged = true;
      rr = rr_new;
      break;
    }
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  res.relative_residual = std::sqrt(rr) / bnorm;
  return res;
}

CgResult cg_solve(const SparseMatrix& M, const Vector& b, double tol, int max_iter);

struct PowerResult {
  double lambda = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Deterministic start vector with entries uniform in [lo, hi).
Vector random_vector(Index dim, std::uint64_t seed, double lo = 0.0, double hi = 1.0);

/// Power iteration on a square operator with real positive dominant
/// eigenvalue. Convergence is measured on the relative change of successive
/// Rayleigh quotients.
template <class Op>
PowerResult power_method(Op&& apply, Index dim, double tol, int max_iter, std::uint64_t seed) {
  Vector x = random_vector(dim, seed);
  if (x.norm() == 0.0) {
    x = random_vector(dim, seed + 1);
    if (x.norm() == 0.0) throw std::runtime_error("power_method: zero start vector after re-seeding");
  }
  x /= x.norm();
  PowerResult res;
  Vector y(dim);
  double lambda_old = 0.0;
  for (int k = 0; k < max_iter; ++k) {
    apply(x, y);
    const double lambda = x.dot(y);
    res.iterations = k + 1;
    res.lambda = lambda;
    const double ynorm = y.norm();
    if (ynorm == 0.0) { // operator annihilated the iterate: dominant eigenvalue 0
      res.lambda = 0.0;
      res.converged = true;
      return res;
    }
    x = y / ynorm;
    if (k > 0 && std::abs(lambda - lambda_old) <= tol * std::abs(lambda)) {
      res.converged = true;
      return res;
    }
    lambda_old = lambda;
  }
  return res;
}

/// Dense LU solve with partial pivoting; throws if a pivot falls below
/// 1e-14 times the largest entry of M.
Vector lu_solve(const DenseMatrix& M, const Vector& b);

/// Spectral norm of a dense matrix via power iteration on K^T K.
double dense_spectral_norm(const DenseMatrix& K, double tol = 1e-10, int max_iter = 10000,
                           std::uint64_t seed = 0x5eed);

} // namespace uzawamg
